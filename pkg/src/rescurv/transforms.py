"""Kron reduction and circle inversion with matched weights.

Kron reduction eliminates a vertex set ``U`` one vertex at a time; removing
``x`` adds ``c_ux c_xv / sum_y c_xy`` to every pair of neighbours of ``x``.
The result is also read off the Schur complement of the Laplacian, and the
two are compared on every call. Surviving vertices are renumbered
``0..k-1`` in increasing order; ``labels[i]`` is the original id of new
vertex ``i``.

Circle inversion over ``x`` (weights with ``p >= 0``) replaces ``x`` by a
vertex with the same id joined to every ``y`` with ``p_y > 0`` at weight
``2 p_y omega_xy``; every other edge ``uv`` gets weight
``c_uv omega_ux omega_xv``.

Both records carry the curvature predicted by the update rules and the
curvature recomputed from the output.
"""

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import exact
from .errors import ConsistencyError, ParameterError, PreconditionError, StructuralError
from .graph import Graph, biconnected_components
from .resistance import (
    NUMERIC,
    curvature,
    effective_resistances,
    laplacian,
    mode_of,
    profile,
    weights,
)

KRON = "kron"
CINV = "cinv"
NUMERIC_TOL = 1e-9
CURVATURE_TOL = 1e-12   # numeric sign threshold for p >= 0 and p_y > 0


@dataclass(frozen=True)
class TransformRecord:
    op: str
    param: tuple
    graph_in: Graph
    c_in: object
    graph_out: Graph
    c_out: object
    labels: tuple
    predicted_p: object
    recomputed_p: object
    checks: dict = field(default_factory=dict)

    @property
    def mode(self):
        return mode_of(self.c_in)

    def to_json(self):
        def vec(x):
            return [str(v) if isinstance(v, Fraction) else float(v) for v in x]

        return {
            "op": self.op,
            "param": list(self.param),
            "input": {"graph": self.graph_in.to_json(), "weights": vec(self.c_in)},
            "output": {"graph": self.graph_out.to_json(), "weights": vec(self.c_out)},
            "labels": list(self.labels),
            "predicted_curvature": vec(self.predicted_p),
            "recomputed_curvature": vec(self.recomputed_p),
            "checks": dict(self.checks),
        }


def _agree(a, b, numeric):
    if len(a) != len(b):
        return False
    if numeric:
        return bool(np.max(np.abs(np.asarray(a, float) - np.asarray(b, float)), initial=0.0) <= NUMERIC_TOL)
    return list(a) == list(b)


def _vertex_set(g, U, what):
    U = sorted(set(int(u) for u in U))
    if not U:
        raise ParameterError(f"{what} must be nonempty")
    if U[0] < 0 or U[-1] >= g.n:
        raise ParameterError(f"{what} contains a vertex outside 0..{g.n - 1}")
    return U


# -- Kron reduction --------------------------------------------------------------------

def _schur(L, keep, drop, numeric):
    if numeric:
        L = np.asarray(L)
        A = L[np.ix_(keep, keep)]
        B = L[np.ix_(keep, drop)]
        C = L[np.ix_(drop, drop)]
        return A - B @ np.linalg.solve(C, B.T)
    A = [[L[i][j] for j in keep] for i in keep]
    B = [[L[i][j] for j in drop] for i in keep]
    C = [[L[i][j] for j in drop] for i in drop]
    X = exact.solve(C, [list(col) for col in zip(*B)])
    BX = exact.matmul(B, X)
    return [[A[i][j] - BX[i][j] for j in range(len(keep))] for i in range(len(keep))]


def kron_reduce(g, c=None, U=(), mode=None):
    """Eliminate the vertices ``U`` (a proper nonempty subset of V)."""
    g.require_connected()
    c = weights(g, c, mode)
    numeric = mode_of(c) == NUMERIC
    U = _vertex_set(g, U, "U")
    if len(U) >= g.n:
        raise PreconditionError("U must be a proper subset of the vertex set")
    W = {e: w for e, w in zip(g.edges, c)}
    adj = {v: set(g.adjacency[v]) for v in range(g.n)}
    p = dict(enumerate(curvature(g, c)))
    for x in U:
        nb = sorted(adj[x])
        S = sum(W[(min(x, y), max(x, y))] for y in nb)
        cx = {y: W.pop((min(x, y), max(x, y))) for y in nb}
        px = p.pop(x)
        for y in nb:
            adj[y].discard(x)
            p[y] = p[y] + cx[y] * px / S
        for i, a in enumerate(nb):
            for b in nb[i + 1:]:
                W[(a, b)] = W.get((a, b), 0) + cx[a] * cx[b] / S
                adj[a].add(b)
                adj[b].add(a)
        del adj[x]
    keep = [v for v in range(g.n) if v not in set(U)]
    new_id = {v: i for i, v in enumerate(keep)}
    edges = sorted((new_id[a], new_id[b]) for (a, b) in W)
    h = Graph(len(keep), edges, name=f"kron({g.name or 'G'})")
    back = {(new_id[a], new_id[b]): w for (a, b), w in W.items()}
    c_out = [back[e] for e in h.edges]
    c_out = np.array(c_out, float) if numeric else tuple(c_out)
    # Schur complement cross-check
    Lr = _schur(laplacian(g, c), keep, U, numeric)
    schur_ok = True
    for i in range(len(keep)):
        for j in range(i + 1, len(keep)):
            want = back.get((i, j), 0)
            if numeric:
                schur_ok &= abs(-Lr[i][j] - want) <= NUMERIC_TOL * max(1.0, abs(want))
            else:
                schur_ok &= -Lr[i][j] == want
    if not schur_ok:
        raise ConsistencyError("sequential Kron weights disagree with the Schur complement")
    W_in = effective_resistances(g, c)
    W_out = effective_resistances(h, c_out)
    res_ok = all(
        _agree([W_in[a][b]], [W_out[i][j]], numeric)
        for i, a in enumerate(keep) for j, b in enumerate(keep)
    )
    predicted = [p[v] for v in keep]
    predicted = np.array(predicted, float) if numeric else predicted
    return TransformRecord(
        KRON, tuple(U), g, c, h, c_out, tuple(keep), predicted, curvature(h, c_out),
        {"schur_agrees": True, "resistances_preserved": bool(res_ok)},
    )


def kron_curvature_check(record):
    """Predicted curvature (neighbours of ``x`` gain ``c_xv p_x / sum c_xy``)
    against the curvature recomputed on the reduced graph."""
    return _agree(record.predicted_p, record.recomputed_p, record.mode == NUMERIC)


def kron_sequence(g, c, order):
    """Apply single-vertex reductions in ``order`` (original ids)."""
    labels = list(range(g.n))
    for x in order:
        rec = kron_reduce(g, c, [labels.index(x)])
        g, c = rec.graph_out, rec.c_out
        labels = [labels[i] for i in rec.labels]
    return g, c, tuple(labels)


# -- circle inversion ------------------------------------------------------------------

def circle_invert(g, c=None, x=0, mode=None):
    """Invert over ``x``; requires ``p(c) >= 0``. The new vertex keeps id ``x``."""
    g.require_connected()
    c = weights(g, c, mode)
    numeric = mode_of(c) == NUMERIC
    x = _vertex_set(g, [x], "x")[0]
    if g.n < 2:
        raise PreconditionError("circle inversion needs at least two vertices")
    prof = profile(g, c)
    p, om = prof.p, prof.omega
    tol = CURVATURE_TOL if numeric else 0
    neg = [v for v in range(g.n) if p[v] < -tol]
    if neg:
        raise PreconditionError(f"circle inversion needs p(c) >= 0; p is negative at vertices {neg}")
    W = {}
    for (u, v), w in zip(g.edges, c):
        if x not in (u, v):
            W[(u, v)] = w * om[u][x] * om[x][v]
    for y in range(g.n):
        if y != x and p[y] > tol:
            W[(min(x, y), max(x, y))] = 2 * p[y] * om[x][y]
    h = Graph(g.n, sorted(W), name=f"cinv({g.name or 'G'})")
    if not h.is_connected():
        raise StructuralError(f"circle inversion over {x} disconnects the graph (no p_y > 0 bridges the pieces)")
    c_out = [W[e] for e in h.edges]
    c_out = np.array(c_out, float) if numeric else tuple(c_out)
    zero = 0.0 if numeric else Fraction(0)
    predicted = [zero] * g.n
    for i in g.incident[x]:
        u, v = g.edges[i]
        y = v if u == x else u
        predicted[y] = c[i] * om[x][y] / 2
    predicted[x] = p[x]
    predicted = np.array(predicted, float) if numeric else predicted
    return TransformRecord(CINV, (x,), g, c, h, c_out, tuple(range(g.n)), predicted, curvature(h, c_out))


def cinv_curvature_check(record):
    """Predicted curvature: ``c_xv omega_xv / 2`` on the old neighbours of
    ``x``, ``p_x`` on the new vertex, zero elsewhere."""
    return _agree(record.predicted_p, record.recomputed_p, record.mode == NUMERIC)


def same_up_to_block_scaling(g1, c1, g2, c2, rel_tol=None):
    """Same edge set and weight ratio constant on every block of ``g1``."""
    if g1.n != g2.n or g1.edges != g2.edges:
        return False
    for comp in biconnected_components(g1).components:
        ratios = [c1[i] / c2[i] for i in comp]
        if rel_tol is None:
            if any(q != ratios[0] for q in ratios):
                return False
        elif any(abs(q / ratios[0] - 1) > rel_tol for q in ratios):
            return False
    return True


def cinv_involution_holds(g, c, x, rel_tol=None):
    rec = circle_invert(g, c, x)
    back = circle_invert(rec.graph_out, rec.c_out, x)
    return same_up_to_block_scaling(g, weights(g, c), back.graph_out, back.c_out, rel_tol)


def _scaled_nx(g, c):
    import networkx as nx

    total = sum(c)
    G = nx.Graph()
    G.add_nodes_from(range(g.n))
    for (u, v), w in zip(g.edges, c):
        G.add_edge(u, v, w=w / total)
    return G


def cinv_commute_holds(g, c, x, y, rel_tol=None):
    """Is ``cinv_x o cinv_y`` isomorphic to ``cinv_y o cinv_x`` as a
    weighted graph, up to one global scalar?"""
    import networkx as nx

    a = circle_invert(g, c, x)
    a = circle_invert(a.graph_out, a.c_out, y)
    b = circle_invert(g, c, y)
    b = circle_invert(b.graph_out, b.c_out, x)
    if rel_tol is None:
        match = lambda e1, e2: e1["w"] == e2["w"]
    else:
        match = lambda e1, e2: abs(e1["w"] / e2["w"] - 1) <= rel_tol
    return nx.is_isomorphic(_scaled_nx(a.graph_out, a.c_out), _scaled_nx(b.graph_out, b.c_out), edge_match=match)
