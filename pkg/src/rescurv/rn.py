"""Exact RP / SRN / NOT_RN classification.

A graph is RN (RP) exactly when some strictly positive distribution on its
spanning trees has expected degree at most 2 (below 2) at every vertex.
Both questions are linear programs over tree probabilities: maximize ``t``
subject to ``mu_T >= t``, ``sum mu = 1`` and the degree rows. Writing
``mu_T = t + nu_T`` with ``nu >= 0`` leaves one column per tree, and trees
with the same degree sequence give identical columns, so the program only
needs one column per distinct degree sequence.

Every verdict carries a certificate: a positive witness distribution when
``t* > 0``, otherwise LP dual values that bound ``t*`` by zero, or a
Farkas vector when no distribution meets the degree bounds at all.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ConsistencyError, ParameterError
from .graph import (
    enumerate_spanning_trees,
    is_one_tough,
    maximum_matching_size,
    tree_degrees,
    TOUGHNESS_MAX_VERTICES,
    TREE_CAP,
)
from .lp import solve_lp_revised as solve_lp
from .resistance import POSITIVE, TreeDistribution, edge_marginals

RP, SRN, NOT_RN = "RP", "SRN", "NOT_RN"


@dataclass(frozen=True)
class Certificate:
    """Dual data ``(y, z)`` with ``y >= 0`` per vertex and free ``z``.

    ``kind="dual"``: every tree column satisfies ``y.deg(T) + z >= 0``, the
    ``t`` column ``sum_v y_v (D_v + s) + N z >= 1`` and ``2 sum y + z <= 0``,
    hence ``t* <= 0``. ``kind="farkas"``: tree columns as before and
    ``2 sum y + z < 0``, so no distribution satisfies the degree rows.
    """

    kind: str
    y: tuple
    z: Fraction

    def to_json(self):
        return {"kind": self.kind, "y": [str(v) for v in self.y], "z": str(self.z)}


@dataclass(frozen=True)
class Decision:
    feasible: bool
    t_star: Fraction          # None when the program has no point with t >= 0
    distribution: TreeDistribution = None
    certificate: Certificate = None
    strict: bool = False


def _columns(g, trees):
    reps = {}
    for k, T in enumerate(trees):
        d = tuple(tree_degrees(g, T))
        if d not in reps:
            reps[d] = k
    return list(reps.keys()), list(reps.values())


def _decide(g, trees, strict):
    g.require_connected()
    if trees is None:
        trees = enumerate_spanning_trees(g)
    N = len(trees)
    degs, reps = _columns(g, trees)
    D = [0] * g.n
    for T in trees:
        for i in T:
            u, v = g.edges[i]
            D[u] += 1
            D[v] += 1
    s = 1 if strict else 0
    # variables: t, nu_1..nu_k
    c = [1] + [0] * len(degs)
    A_ub = [[D[v] + s] + [d[v] for d in degs] for v in range(g.n)]
    b_ub = [2] * g.n
    A_eq = [[N] + [1] * len(degs)]
    b_eq = [1]
    res = solve_lp(c, A_ub, b_ub, A_eq, b_eq)
    if res.status == "infeasible":
        cert = _farkas(g, degs)
        return Decision(False, None, None, cert, strict)
    if not res.optimal:
        raise ConsistencyError(f"tree-distribution LP is {res.status}; it is bounded by construction")
    t = res.x[0]
    if t > 0:
        probs = [t] * N
        for j, k in enumerate(reps):
            probs[k] += res.x[1 + j]
        mu = TreeDistribution(tuple(trees), tuple(probs), POSITIVE)
        return Decision(True, t, mu, None, strict)
    cert = Certificate("dual", tuple(res.dual_ub), res.dual_eq[0])
    return Decision(False, t, None, cert, strict)


def _farkas(g, degs):
    """Find ``y >= 0, z`` with ``y.d + z >= 0`` for every degree column and
    ``2 sum y + z < 0``; variables ``y``, ``z+``, ``z-``."""
    n = g.n
    c = [-2] * n + [-1, 1]
    A_ub = [[-d[v] for v in range(n)] + [-1, 1] for d in degs]
    b_ub = [0] * len(degs)
    A_ub.append([1] * n + [0, 0])
    b_ub.append(1)
    res = solve_lp(c, A_ub, b_ub)
    if not res.optimal or res.value <= 0:
        raise ConsistencyError("degree program is infeasible but no Farkas vector was found")
    y = res.x[:n]
    z = res.x[n] - res.x[n + 1]
    return Certificate("farkas", tuple(y), z)


def decide_rn(g, trees=None):
    """Max ``t`` with ``mu_T >= t``, ``sum mu = 1`` and expected degrees ``<= 2``."""
    return _decide(g, trees, strict=False)


def decide_rp(g, trees=None):
    """As :func:`decide_rn` with expected degrees ``<= 2 - t``."""
    return _decide(g, trees, strict=True)


def check_certificate(g, cert, strict, trees=None):
    """Re-verify a negative certificate against every spanning tree."""
    if trees is None:
        trees = enumerate_spanning_trees(g)
    y, z = cert.y, cert.z
    if len(y) != g.n or any(v < 0 for v in y):
        return False
    D = [0] * g.n
    for T in trees:
        d = tree_degrees(g, T)
        if sum(a * b for a, b in zip(y, d)) + z < 0:
            return False
        for v in range(g.n):
            D[v] += d[v]
    obj = 2 * sum(y) + z
    if cert.kind == "farkas":
        return obj < 0
    s = 1 if strict else 0
    tcol = sum(y[v] * (D[v] + s) for v in range(g.n)) + len(trees) * z
    return tcol >= 1 and obj <= 0


@dataclass(frozen=True)
class Verdict:
    cls: str
    t_star: Fraction
    distribution: TreeDistribution = None
    marginals: tuple = None
    flags: dict = field(default_factory=dict)
    not_rp_certificate: Certificate = None
    not_rn_certificate: Certificate = None

    @property
    def rn(self):
        return self.cls in (RP, SRN)

    def to_json(self, g):
        out = {
            "class": self.cls,
            "t_star": None if self.t_star is None else str(self.t_star),
            "witness_trees": self.distribution.to_json(g) if self.distribution else [],
            "marginals": [str(v) for v in self.marginals] if self.marginals else [],
            "flags": dict(self.flags),
        }
        if self.not_rp_certificate is not None:
            out["not_rp_certificate"] = self.not_rp_certificate.to_json()
        if self.not_rn_certificate is not None:
            out["not_rn_certificate"] = self.not_rn_certificate.to_json()
        return out


def classify(g, cap=TREE_CAP, check_flags=True):
    """RP if the strict program has ``t* > 0``, else SRN if the non-strict
    one does, else NOT_RN. Consistency with 1-toughness (for RP) and with
    the existence of a near-perfect matching (for RN) is enforced."""
    g.require_connected()
    trees = enumerate_spanning_trees(g, cap)
    rp = decide_rp(g, trees)
    if rp.feasible:
        cls, dec, rn = RP, rp, None
    else:
        rn = decide_rn(g, trees)
        cls, dec = (SRN, rn) if rn.feasible else (NOT_RN, rn)
    flags = {}
    if check_flags:
        nu = maximum_matching_size(g)
        flags["near_perfect_matching"] = nu >= g.n // 2
        if g.n <= TOUGHNESS_MAX_VERTICES:
            flags["one_tough"] = is_one_tough(g).one_tough
        if cls in (RP, SRN) and not flags["near_perfect_matching"]:
            raise ConsistencyError(f"{g!r} classified {cls} but has no near-perfect matching")
        if cls == RP and flags.get("one_tough") is False:
            raise ConsistencyError(f"{g!r} classified RP but is not 1-tough")
    marg = tuple(edge_marginals(g, dec.distribution)) if dec.feasible else None
    return Verdict(
        cls,
        dec.t_star,
        dec.distribution if dec.feasible else None,
        marg,
        flags,
        not_rp_certificate=rp.certificate,
        not_rn_certificate=rn.certificate if (rn is not None and not rn.feasible) else None,
    )


@dataclass(frozen=True)
class WitnessWeights:
    weights: object
    curvature: object
    residual: float
    iterations: int


def witness_weights(g, mu, tol=1e-9, max_iter=100_000):
    """Fit weights whose relative resistances are the marginals of ``mu``."""
    import numpy as np

    from .fitting import fit_weights
    from .errors import ResourceError
    from .resistance import curvature

    if any(p <= 0 for p in mu.probs):
        raise ParameterError("witness distribution must be strictly positive")
    r = edge_marginals(g, mu)
    fit = fit_weights(g, r, tol=tol, max_iter=max_iter)
    if not fit.converged:
        raise ResourceError(f"weight fitting did not converge in {max_iter} iterations (residual {fit.residual:.3e})")
    p = curvature(g, fit.weights)
    return WitnessWeights(fit.weights, np.asarray(p), fit.residual, fit.iterations)


def tough_search(max_vertices=6, cap=TREE_CAP):
    """Classify every connected 1-tough graph on 3..max_vertices vertices
    (networkx atlas, up to 7). Reports the ones that are not RP; nothing
    is asserted about the outcome."""
    if not 3 <= max_vertices <= 7:
        raise ParameterError("max_vertices must be between 3 and 7 (atlas range)")
    import networkx as nx

    from .graph import Graph

    counts = {RP: 0, SRN: 0, NOT_RN: 0}
    not_rp = []
    for i, h in enumerate(nx.graph_atlas_g()):
        n = h.number_of_nodes()
        if n < 3 or n > max_vertices or not nx.is_connected(h):
            continue
        g = Graph(n, list(h.edges()), f"atlas{i}")
        if not is_one_tough(g).one_tough:
            continue
        cls = classify(g, cap, check_flags=False).cls
        counts[cls] += 1
        if cls != RP:
            not_rp.append({"graph": g.name, "n": g.n, "edges": [list(e) for e in g.edges], "class": cls})
    return {"max_vertices": max_vertices, "counts": counts, "not_rp": not_rp}
