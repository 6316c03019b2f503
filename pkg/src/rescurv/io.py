"""Reading graphs and weight vectors from text, JSON and short names."""

import json
import os
import re

from .errors import ParameterError
from .exact import frac
from .graph import Graph, build_named, glue, cycle


def parse_graph_text(text, name=""):
    """Header ``n m`` followed by ``m`` lines ``u v``; ``#`` starts a comment."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ParameterError("empty graph file")
    try:
        n, m = (int(t) for t in lines[0].split())
    except ValueError as exc:
        raise ParameterError(f"bad header {lines[0]!r}; expected 'n m'") from exc
    body = lines[1:]
    if len(body) != m:
        raise ParameterError(f"header announces {m} edges, found {len(body)}")
    edges = []
    for ln in body:
        parts = ln.split()
        if len(parts) != 2:
            raise ParameterError(f"bad edge line {ln!r}")
        try:
            edges.append((int(parts[0]), int(parts[1])))
        except ValueError as exc:
            raise ParameterError(f"bad edge line {ln!r}") from exc
    return Graph(n, edges, name=name)


def parse_graph_json(data, name=""):
    if isinstance(data, str):
        data = json.loads(data)
    try:
        return Graph(int(data["n"]), [tuple(e) for e in data["edges"]], name=data.get("name", name))
    except (KeyError, TypeError) as exc:
        raise ParameterError('graph JSON needs {"n": int, "edges": [[u, v], ...]}') from exc


_SHORT = re.compile(r"^(k|c|p)(\d+)$")


def named_graph(spec):
    """``path:n``, ``cycle:n``, ``complete:n``, ``kab:a,b``, ``petersen``,
    ``grid:n,m``, ``bowtie`` and short forms ``c5``, ``p4``, ``k4``, ``k23``.

    Use ``complete:n`` for complete graphs on 11 or more vertices.
    """
    s = spec.strip().lower()
    if s == "petersen":
        return build_named("petersen")
    if s == "bowtie":
        return glue(cycle(3), cycle(3), 0, 0, "bowtie")
    if ":" in s:
        fam, _, args = s.partition(":")
        try:
            params = [int(a) for a in args.split(",")]
        except ValueError as exc:
            raise ParameterError(f"bad parameters in {spec!r}") from exc
        fam = {"kab": "complete_bipartite", "k": "complete"}.get(fam, fam)
        return build_named(fam, *params)
    m = _SHORT.match(s)
    if m:
        kind, digits = m.groups()
        # two nonzero digits after k name a complete bipartite graph: k23 is K_{2,3}
        if kind == "k" and len(digits) == 2 and "0" not in digits:
            return build_named("complete_bipartite", int(digits[0]), int(digits[1]))
        fam = {"k": "complete", "c": "cycle", "p": "path"}[kind]
        return build_named(fam, int(digits))
    raise ParameterError(f"unknown graph name {spec!r}")


def load_graph(spec):
    """A file path (text or JSON) or a built-in name."""
    if os.path.isfile(spec):
        with open(spec) as fh:
            text = fh.read()
        name = os.path.splitext(os.path.basename(spec))[0]
        if text.lstrip().startswith("{"):
            return parse_graph_json(text, name)
        return parse_graph_text(text, name)
    return named_graph(spec)


def parse_weights(text, g):
    """Lines ``u v weight`` (decimal or ``p/q``), each edge exactly once.

    Returned as Fractions, so decimal literals stay exact.
    """
    out = [None] * g.m
    for ln in text.splitlines():
        ln = ln.split("#", 1)[0].strip()
        if not ln:
            continue
        parts = ln.split()
        if len(parts) != 3:
            raise ParameterError(f"bad weight line {ln!r}; expected 'u v weight'")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise ParameterError(f"bad weight line {ln!r}") from exc
        if not g.has_edge(u, v):
            raise ParameterError(f"weight given for non-edge {(u, v)}")
        i = g.index(u, v)
        if out[i] is not None:
            raise ParameterError(f"edge {(u, v)} has more than one weight")
        out[i] = frac(parts[2])
    missing = [g.edges[i] for i, w in enumerate(out) if w is None]
    if missing:
        raise ParameterError(f"no weight for edges {missing}")
    return out


def load_weights(path, g):
    with open(path) as fh:
        return parse_weights(fh.read(), g)


def format_weights(g, c):
    return "".join(f"{u} {v} {w}\n" for (u, v), w in zip(g.edges, c))
