"""Command-line front end: ``rescurv <subcommand> --graph ... [options]``.

Exit status: 0 success, 1 bad input or violated precondition, 2 an
enumeration or iteration cap was hit, 3 an internal consistency check failed.
"""

import argparse
import json
import random
import sys
from fractions import Fraction
from importlib import resources

import numpy as np

from . import capacity, fitting, polytope, rn, transforms
from .corpus import corpus, random_rational_weights
from .errors import ConsistencyError, ParameterError, RescurvError
from .graph import (
    TREE_CAP,
    complete_bipartite,
    count_spanning_trees,
    cycle,
    enumerate_spanning_trees,
    grid,
    hamiltonian_paths,
    is_one_tough,
    path,
    petersen,
)
from .io import load_graph, load_weights
from .resistance import (
    EXACT,
    NUMERIC,
    curvature,
    curvature_via_K,
    foster_check,
    normalize_weights,
    relative_resistances,
    weights,
)

COMMANDS = ("curvature", "decide", "fit", "kron", "cinv", "theta", "capacity", "conjecture", "verify", "gallery")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParameterError(message)


def _num(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (np.floating, float)):
        return float(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    return x


def _vec(xs):
    return [_num(v) for v in xs]


def _positive_int(s):
    v = int(s)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _render_text(obj, indent=0):
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.extend(_render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(obj, list):
        for item in obj:
            if isinstance(item, (dict, list)) and not _flat(item):
                lines.append(f"{pad}-")
                lines.extend(_render_text(item, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(item)}")
    else:
        lines.append(f"{pad}{_scalar(obj)}")
    return lines


def _flat(v):
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v)


def _scalar(v):
    if isinstance(v, list):
        return " ".join(_scalar(x) for x in v)
    if v is None:
        return "-"
    return str(v)


def _json_default(x):
    if isinstance(x, np.generic):
        return x.item()
    if isinstance(x, Fraction):
        return str(x)
    raise TypeError(f"cannot serialize {type(x).__name__}")


def emit(payload, fmt, out=None):
    out = out or sys.stdout
    if fmt == "text":
        out.write("\n".join(_render_text(payload)) + "\n")
    else:
        out.write(json.dumps(payload, indent=2, sort_keys=True, default=_json_default) + "\n")


def _graph_and_weights(args):
    g = load_graph(args.graph)
    c = load_weights(args.weights, g) if args.weights else [Fraction(1)] * g.m
    if args.mode == NUMERIC:
        c = [float(v) for v in c]
    return g, weights(g, c, args.mode)


# -- subcommands -----------------------------------------------------------------------

def cmd_curvature(args):
    g, c = _graph_and_weights(args)
    r = relative_resistances(g, c)
    p = curvature(g, c)
    f = foster_check(g, c, r=r)
    return {
        "graph": g.to_json(),
        "mode": args.mode,
        "weights": _vec(c),
        "r": _vec(r),
        "p": _vec(p),
        "foster": {"global": bool(f.global_ok), "per_block": bool(f.per_component_ok)},
    }


def cmd_decide(args):
    g = load_graph(args.graph)
    v = rn.classify(g, cap=args.cap_trees)
    return v.to_json(g)


def cmd_fit(args):
    g = load_graph(args.graph)
    if args.target:
        target = load_weights(args.target, g)
    else:
        c = load_weights(args.weights, g) if args.weights else [Fraction(1)] * g.m
        target = relative_resistances(g, c, EXACT)
    res = fitting.fit_weights(g, target, tol=args.tol, max_iter=args.max_iter, trace=args.trace)
    out = res.to_json(with_trace=args.trace)
    out["graph"] = g.to_json()
    return out


def _check(ok, what):
    if not ok:
        raise ConsistencyError(f"{what}: predicted and recomputed curvature differ")


def cmd_kron(args):
    g, c = _graph_and_weights(args)
    U = [int(v) for v in args.vertices.split(",") if v.strip()]
    rec = transforms.kron_reduce(g, c, U)
    _check(transforms.kron_curvature_check(rec), "Kron reduction")
    return rec.to_json()


def cmd_cinv(args):
    g, c = _graph_and_weights(args)
    rec = transforms.circle_invert(g, c, args.vertex)
    _check(transforms.cinv_curvature_check(rec), "circle inversion")
    return rec.to_json()


def cmd_theta(args):
    g = load_graph(args.graph)
    pts = polytope.theta_integer_points(g, args.k)
    out = {"k": args.k, "count": len(pts)}
    if args.points:
        out["points"] = [list(p) for p in pts]
    return out


def cmd_capacity(args):
    g, c = _graph_and_weights(args)
    if args.mode != EXACT:
        raise ParameterError("capacity tables are exact; use --mode exact")
    c = normalize_weights(g, c, EXACT)
    table = capacity.full_table(g, c)
    rep = capacity.is_submodular(table)
    out = table.to_json()
    out["submodular"] = rep.submodular
    out["min_slack"] = str(rep.min_slack)
    out["argmin_pair"] = list(rep.pair)
    out["curvature"] = _vec(curvature(g, c))
    return out


def cmd_conjecture(args):
    g = load_graph(args.graph)
    return capacity.conjecture_search(g, args.samples, seed=args.seed)


def verify_graph(g, rng, cap=TREE_CAP):
    checks = {}
    N = count_spanning_trees(g)
    trees = enumerate_spanning_trees(g, cap)
    checks["matrix_tree"] = len(trees) == N
    ok = True
    for c in [None] + [random_rational_weights(g, rng) for _ in range(2)]:
        f = foster_check(g, c, EXACT)
        ok &= f.global_ok and f.per_component_ok
    checks["foster"] = bool(ok)
    cn = normalize_weights(g, None, EXACT)
    checks["curvature_via_K"] = curvature_via_K(g, cn) == curvature(g, cn)
    v = rn.classify(g, cap=cap)
    ip = polytope.interior_point_in_doubled_matching(g)
    checks["rn_matches_interior_route"] = v.rn == ip.found
    if v.not_rp_certificate is not None:
        checks["not_rp_certificate"] = rn.check_certificate(g, v.not_rp_certificate, True, trees)
    if v.not_rn_certificate is not None:
        checks["not_rn_certificate"] = rn.check_certificate(g, v.not_rn_certificate, False, trees)
    pts = polytope.theta_integer_points(g, 1)
    checks["theta_points_are_hamiltonian_paths"] = sorted(
        tuple(i for i, x in enumerate(p) if x) for p in pts) == sorted(hamiltonian_paths(g))
    c = random_rational_weights(g, rng)
    if g.n >= 2:
        x = rng.randrange(g.n)
        checks["kron_lemma"] = transforms.kron_curvature_check(transforms.kron_reduce(g, c, [x]))
    if g.n >= 2 and min(curvature(g, None, EXACT)) >= 0:
        try:
            rec = transforms.circle_invert(g, None, 0, EXACT)
            checks["cinv_lemma"] = transforms.cinv_curvature_check(rec)
        except ParameterError:
            pass
    return {"graph": g.name, "class": v.cls, "checks": checks, "ok": all(checks.values())}


def cmd_verify(args):
    rng = random.Random(args.seed)
    rows = [verify_graph(g, rng, args.cap_trees) for g in corpus() if g.n <= args.max_vertices]
    out = {"graphs": rows, "ok": all(r["ok"] for r in rows)}
    if not out["ok"]:
        emit(out, args.out)
        bad = [r["graph"] for r in rows if not r["ok"]]
        raise ConsistencyError(f"invariant checks failed on {bad}")
    return out


def gallery_graphs():
    gs = [cycle(n) for n in range(3, 9)]
    gs += [complete_bipartite(n, n + 1) for n in (1, 2, 3)]
    gs.append(petersen())
    gs += [path(n) for n in range(2, 7)]
    gs += [grid(2, m) for m in range(2, 6)] + [grid(3, 3)]
    return gs


def gallery():
    rows = []
    for g in gallery_graphs():
        v = rn.classify(g)
        rows.append({
            "graph": g.name,
            "n": g.n,
            "m": g.m,
            "spanning_trees": count_spanning_trees(g),
            "hamiltonian_paths": len(hamiltonian_paths(g)),
            "one_tough": is_one_tough(g).one_tough,
            "class": v.cls,
            "t_star": None if v.t_star is None else str(v.t_star),
            "unit_curvature": _vec(curvature(g, None, EXACT)),
        })
    return {"gallery": rows}


def golden_gallery():
    text = resources.files("rescurv").joinpath("data/gallery.json").read_text()
    return json.loads(text)


def cmd_gallery(args):
    out = gallery()
    if args.check and out != golden_gallery():
        raise ConsistencyError("gallery output differs from the committed golden file")
    return out


def cmd_tough(args):
    return rn.tough_search(args.max_vertices, args.cap_trees)


# -- parser ----------------------------------------------------------------------------

def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--mode", choices=(EXACT, NUMERIC), default=EXACT)
    common.add_argument("--tol", type=float, default=fitting.DEFAULT_TOL)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--cap-trees", type=_positive_int, default=TREE_CAP)
    common.add_argument("--out", choices=("json", "text"), default="json")

    def graph_opts(p, weights=True):
        p.add_argument("--graph", required=True, help="file path or name: path:n cycle:n complete:n kab:a,b petersen grid:n,m")
        if weights:
            p.add_argument("--weights", help="file with lines 'u v weight'")

    parser = _Parser(prog="rescurv", description="Resistance curvature toolkit.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("curvature", parents=[common], help="relative resistances and curvature")
    graph_opts(p)
    p = sub.add_parser("decide", parents=[common], help="classify as RP / SRN / NOT_RN")
    graph_opts(p, weights=False)
    p = sub.add_parser("fit", parents=[common], help="fit weights to target relative resistances")
    graph_opts(p)
    p.add_argument("--target", help="file with lines 'u v r'; default r of --weights")
    p.add_argument("--max-iter", type=_positive_int, default=fitting.DEFAULT_MAX_ITER)
    p.add_argument("--trace", action="store_true")
    p = sub.add_parser("kron", parents=[common], help="Kron reduction")
    graph_opts(p)
    p.add_argument("--vertices", required=True, help="comma-separated vertex ids")
    p = sub.add_parser("cinv", parents=[common], help="circle inversion")
    graph_opts(p)
    p.add_argument("--vertex", type=int, required=True)
    p = sub.add_parser("theta", parents=[common], help="integer points of k*Theta(G)")
    graph_opts(p, weights=False)
    p.add_argument("--k", type=_positive_int, default=1)
    p.add_argument("--points", action="store_true")
    p = sub.add_parser("capacity", parents=[common], help="resistance capacity table")
    graph_opts(p)
    p = sub.add_parser("conjecture", parents=[common], help="sample submodularity vs curvature sign")
    graph_opts(p, weights=False)
    p.add_argument("--samples", type=int, default=100)
    p = sub.add_parser("verify", parents=[common], help="invariant suite on the built-in corpus")
    p.add_argument("--max-vertices", type=int, default=16)
    p = sub.add_parser("tough", parents=[common], help="classify all 1-tough atlas graphs, report non-RP ones")
    p.add_argument("--max-vertices", type=int, default=6)
    p = sub.add_parser("gallery", parents=[common], help="worked-examples table")
    p.add_argument("--check", action="store_true", help="compare against the golden file")
    return parser


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        if args.tol <= 0:
            raise ParameterError("--tol must be positive")
        payload = globals()[f"cmd_{args.command}"](args)
        emit(payload, args.out)
        return 0
    except RescurvError as exc:
        sys.stderr.write(f"rescurv: {type(exc).__name__}: {exc}\n")
        return exc.exit_code
    except SystemExit as exc:  # --help
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
