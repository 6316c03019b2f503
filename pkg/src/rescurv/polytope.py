"""Spanning tree polytope P(G), doubled matching polytope 2M(G) and their
intersection Theta(G): constraint systems, exact membership, interior
points, integer points of dilations.

Two equivalent descriptions of P(G) are available. The eager one has an
upper bound ``x(A) <= rank(A)`` for every edge subset ``A`` (capped at
``EAGER_EDGE_CAP`` edges). The vertex-subset one bounds ``x(E(S))`` for
induced edge sets only; every facet of P(G) appears in it, so it decides
both closed and relative-interior membership and is used as the lazy
oracle beyond the cap.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import exact
from .errors import ParameterError, PreconditionError, ResourceError
from .graph import (
    biconnected_components,
    edge_set_rank,
    enumerate_matchings,
    enumerate_spanning_trees,
    hamiltonian_paths,
    is_biconnected,
)
from .lp import solve_lp, solve_lp_revised

EAGER_EDGE_CAP = 20
VERTEX_SUBSET_CAP = 20

LE, EQ, GE = "<=", "=", ">="


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple   # 0/1 per edge
    relation: str
    bound: int
    kind: str       # tree_upper | tree_equality | nonneg | degree | odd_set
    tag: str        # provenance: the subset A, vertex v or odd set U

    @property
    def implicit_equality(self):
        return self.kind == "tree_equality"

    def to_json(self):
        return {"coeffs": list(self.coeffs), "relation": self.relation, "bound": self.bound,
                "kind": self.kind, "tag": self.tag}


class HyperplaneSystem:
    """Rows ``A x (relation) b`` stored as numpy arrays; constraints are
    materialized lazily."""

    def __init__(self, g, A, bound, kind, tags, relation):
        self.g = g
        self.A = A                    # (k, m) int8
        self.bound = bound            # (k,) int64
        self.kind = kind              # list of kind strings
        self.tags = tags              # list of tag strings
        self.relation = relation      # list of relation strings

    def __len__(self):
        return len(self.kind)

    def __getitem__(self, i):
        return Constraint(tuple(int(v) for v in self.A[i]), self.relation[i], int(self.bound[i]),
                          self.kind[i], self.tags[i])

    def __iter__(self):
        return (self[i] for i in range(len(self)))

    def to_json(self):
        return [c.to_json() for c in self]

    def first_violation(self, x, strict=False):
        """Index of the first violated row, or ``None``.

        ``strict`` turns every row that is not an implicit equality into a
        strict inequality (relative interior test).
        """
        lhs, d = _apply(self.A, x)
        rhs = _scaled(self.bound, d)
        rel = np.array(self.relation)
        eq_rows = np.array([k == "tree_equality" for k in self.kind]) | (rel == EQ)
        le = (rel == LE) & ~eq_rows
        ge = (rel == GE) & ~eq_rows
        bad = eq_rows & (lhs != rhs)
        if strict:
            bad |= le & (lhs >= rhs)
            bad |= ge & (lhs <= rhs)
        else:
            bad |= le & (lhs > rhs)
            bad |= ge & (lhs < rhs)
        hits = np.nonzero(bad)[0]
        return int(hits[0]) if len(hits) else None


def _as_fractions(x, m):
    x = [exact.frac(v) for v in x]
    if len(x) != m:
        raise ParameterError(f"edge vector has length {len(x)}, graph has {m} edges")
    return x


def _apply(A, x, d=None):
    """Exact ``A @ x`` for rational ``x``: returns integer numerators and the
    common denominator ``d`` (computed unless given)."""
    if d is None:
        d = exact.common_denominator(x)
    X = [int(v * d) for v in x]
    big = max((abs(v) for v in X), default=0) * max(A.shape[1], 1)
    if big < 2 ** 62:
        return A.astype(np.int64) @ np.array(X, dtype=np.int64), d
    return A.astype(object) @ np.array(X, dtype=object), d


def _scaled(bound, d):
    if abs(int(bound.max(initial=0))) * d < 2 ** 62 and abs(int(bound.min(initial=0))) * d < 2 ** 62:
        return bound.astype(np.int64) * d
    return bound.astype(object) * d


def _block_masks(g):
    blocks = biconnected_components(g)
    masks = []
    for comp in blocks.components:
        mk = 0
        for i in comp:
            mk |= 1 << i
        masks.append(mk)
    return masks


def _union_of_blocks(mask, block_masks):
    return all((mask & b) in (0, b) for b in block_masks)


@lru_cache(maxsize=64)
def tree_polytope_constraints(g, cap=EAGER_EDGE_CAP):
    """One upper bound per nonempty ``A`` in ``E`` plus nonnegativity.

    Rows whose ``A`` is a union of blocks are tagged ``tree_equality``.
    """
    g.require_connected()
    m = g.m
    if m > cap:
        raise ResourceError(f"eager tree-polytope generation capped at {cap} edges, {g!r} has {m}")
    bm = _block_masks(g)
    k = (1 << m) - 1
    A = np.zeros((k + m, m), dtype=np.int8)
    bound = np.zeros(k + m, dtype=np.int64)
    kinds, tags, rels = [], [], []
    for mask in range(1, 1 << m):
        idx = [i for i in range(m) if mask >> i & 1]
        A[mask - 1, idx] = 1
        bound[mask - 1] = edge_set_rank(g, idx)
        kinds.append("tree_equality" if _union_of_blocks(mask, bm) else "tree_upper")
        tags.append("A=" + ",".join(f"{g.edges[i][0]}-{g.edges[i][1]}" for i in idx))
        rels.append(LE)
    for i in range(m):
        A[k + i, i] = 1
        kinds.append("nonneg")
        tags.append(f"e={g.edges[i][0]}-{g.edges[i][1]}")
        rels.append(GE)
    return HyperplaneSystem(g, A, bound, kinds, tags, rels)


@lru_cache(maxsize=64)
def _vertex_subset_table(g):
    """For every vertex subset S: incidence of E(S), rank of E(S), whether
    E(S) is a union of blocks. Arrays indexed by the bitmask of S."""
    n, m = g.n, g.m
    if n > VERTEX_SUBSET_CAP:
        raise ResourceError(f"vertex-subset oracle capped at {VERTEX_SUBSET_CAP} vertices, {g!r} has {n}")
    N = 1 << n
    inc = np.zeros((N, m), dtype=np.int8)
    us = np.array([e[0] for e in g.edges], dtype=np.int64)
    vs = np.array([e[1] for e in g.edges], dtype=np.int64)
    masks = np.arange(N, dtype=np.int64)
    if m:
        inc[:] = (((masks[:, None] >> us[None, :]) & 1) & ((masks[:, None] >> vs[None, :]) & 1)).astype(np.int8)
    size = np.array([bin(s).count("1") for s in range(N)], dtype=np.int64)
    # rank(E(S)) = |S| - components(G[S])
    comps = np.zeros(N, dtype=np.int64)
    adjmask = [0] * n
    for u, v in g.edges:
        adjmask[u] |= 1 << v
        adjmask[v] |= 1 << u
    for S in range(1, N):
        comps[S] = _components_of_mask(S, adjmask)
    rank = size - comps
    # E(S) is a union of blocks iff it meets every block fully or not at all
    union = np.ones(N, dtype=bool)
    for comp in biconnected_components(g).components:
        hit = inc[:, list(comp)].sum(axis=1)
        union &= (hit == 0) | (hit == len(comp))
    return inc, rank, union, size


def _components_of_mask(S, adjmask):
    count = 0
    rest = S
    while rest:
        low = rest & -rest
        seen = low
        frontier = low
        while frontier:
            b = frontier & -frontier
            frontier ^= b
            v = b.bit_length() - 1
            new = adjmask[v] & S & ~seen
            seen |= new
            frontier |= new
        rest &= ~seen
        count += 1
    return count


def vertex_subset_tree_constraints(g):
    """``x(E(S)) <= rank(E(S))`` for every vertex subset S with E(S) nonempty,
    plus nonnegativity; deduplicated by edge set."""
    g.require_connected()
    inc, rank, union, _ = _vertex_subset_table(g)
    seen = {}
    for S in range(1, len(rank)):
        row = inc[S]
        if not row.any():
            continue
        key = row.tobytes()
        if key not in seen:
            seen[key] = S
    order = sorted(seen.values())
    m = g.m
    A = np.zeros((len(order) + m, m), dtype=np.int8)
    bound = np.zeros(len(order) + m, dtype=np.int64)
    kinds, tags, rels = [], [], []
    for r, S in enumerate(order):
        A[r] = inc[S]
        bound[r] = rank[S]
        kinds.append("tree_equality" if union[S] else "tree_upper")
        tags.append("S=" + ",".join(str(v) for v in range(g.n) if S >> v & 1))
        rels.append(LE)
    k = len(order)
    for i in range(m):
        A[k + i, i] = 1
        kinds.append("nonneg")
        tags.append(f"e={g.edges[i][0]}-{g.edges[i][1]}")
        rels.append(GE)
    return HyperplaneSystem(g, A, bound, kinds, tags, rels)


@lru_cache(maxsize=64)
def doubled_matching_constraints(g, cap=VERTEX_SUBSET_CAP):
    """Nonnegativity, ``x(delta(v)) <= 2`` and ``x(E(U)) <= |U| - 1`` for odd ``|U| >= 3``."""
    n, m = g.n, g.m
    if n > cap:
        raise ResourceError(f"odd-set generation capped at {cap} vertices, {g!r} has {n}")
    rows, bound, kinds, tags, rels = [], [], [], [], []
    for i in range(m):
        r = [0] * m
        r[i] = 1
        rows.append(r)
        bound.append(0)
        kinds.append("nonneg")
        tags.append(f"e={g.edges[i][0]}-{g.edges[i][1]}")
        rels.append(GE)
    for v in range(n):
        r = [0] * m
        for i in g.incident[v]:
            r[i] = 1
        rows.append(r)
        bound.append(2)
        kinds.append("degree")
        tags.append(f"v={v}")
        rels.append(LE)
    for U in range(1, 1 << n):
        size = bin(U).count("1")
        if size < 3 or size % 2 == 0:
            continue
        r = [1 if (U >> u & 1 and U >> v & 1) else 0 for u, v in g.edges]
        if not any(r):
            continue
        rows.append(r)
        bound.append(2 * (size // 2))
        kinds.append("odd_set")
        tags.append("U=" + ",".join(str(v) for v in range(n) if U >> v & 1))
        rels.append(LE)
    A = np.array(rows, dtype=np.int8).reshape(len(rows), m)
    return HyperplaneSystem(g, A, np.array(bound, dtype=np.int64), kinds, tags, rels)


def tree_system(g):
    """The eager system when within the cap, else the vertex-subset oracle."""
    if g.m <= EAGER_EDGE_CAP:
        return tree_polytope_constraints(g)
    return vertex_subset_tree_constraints(g)


@dataclass(frozen=True)
class Membership:
    member: bool
    violated: Constraint = None


P, P_INTERIOR, TWO_M, THETA = "P", "P_interior", "2M", "Theta"


def membership(g, x, which, system=None):
    """Exact membership of the edge vector ``x`` in P, relint P, 2M or Theta."""
    x = _as_fractions(x, g.m)
    if which in (P, P_INTERIOR, THETA):
        sysP = system if system is not None else tree_system(g)
        i = sysP.first_violation(x, strict=(which == P_INTERIOR))
        if i is not None:
            return Membership(False, sysP[i])
        if which != THETA:
            return Membership(True)
    if which in (TWO_M, THETA):
        sysM = doubled_matching_constraints(g)
        i = sysM.first_violation(x)
        if i is not None:
            return Membership(False, sysM[i])
        return Membership(True)
    raise ParameterError(f"unknown polytope {which!r}")


def indicator(g, edge_idx):
    x = [0] * g.m
    for i in edge_idx:
        x[i] = 1
    return x


# -- LP-based checks --------------------------------------------------------------

def in_convex_hull(points, x):
    """Exact LP: is ``x`` a convex combination of ``points``?"""
    if not points:
        return False
    k = len(points)
    A_eq = [[p[e] for p in points] for e in range(len(x))] + [[1] * k]
    b_eq = list(x) + [1]
    res = solve_lp_revised([0] * k, A_eq=A_eq, b_eq=b_eq)
    return res.optimal


def in_tree_hull(g, x, trees=None):
    trees = enumerate_spanning_trees(g) if trees is None else trees
    return in_convex_hull([indicator(g, T) for T in trees], x)


def in_doubled_matching_hull(g, x, matchings=None):
    matchings = enumerate_matchings(g) if matchings is None else matchings
    return in_convex_hull([[2 * v for v in indicator(g, M)] for M in matchings], x)


@dataclass(frozen=True)
class NonSeparable:
    non_separable: bool
    t_star: Fraction
    weights: tuple  # convex coefficients over F at the optimum


def _strict_rows(g):
    """Non-implicit rows of the vertex-subset system, as (coeffs, bound)."""
    sysP = vertex_subset_tree_constraints(g)
    rows = []
    for i in range(len(sysP)):
        if sysP.kind[i] == "tree_upper":
            rows.append((sysP.A[i], int(sysP.bound[i])))
    return rows


def non_separable(g, F):
    """Does ``conv(e_T | T in F)`` meet the relative interior of P(G)?

    Maximizes the smallest slack ``t`` of the strict constraints over convex
    combinations of F; non-separable exactly when ``t* > 0``.
    """
    F = [tuple(T) for T in F]
    if not F:
        raise ParameterError("F must contain at least one spanning tree")
    k = len(F)
    inds = [indicator(g, T) for T in F]
    A_ub, b_ub = [], []
    for coeffs, b in _strict_rows(g):
        A_ub.append([int(np.dot(coeffs, v)) for v in inds] + [1])
        b_ub.append(b)
    for e in range(g.m):
        A_ub.append([-v[e] for v in inds] + [1])
        b_ub.append(0)
    A_eq = [[1] * k + [0]]
    c = [0] * k + [1]
    res = solve_lp(c, A_ub, b_ub, A_eq, [1])
    if not res.optimal:
        raise ResourceError(f"non-separability LP ended with status {res.status}")
    return NonSeparable(res.value > 0, res.value, res.x[:k])


def in_proper_face(g, F):
    """Brute force: is some non-implicit constraint tight on every e_T, T in F?"""
    sysP = tree_system(g)
    for i in range(len(sysP)):
        if sysP.kind[i] == "tree_equality":
            continue
        row = sysP.A[i]
        b = int(sysP.bound[i])
        if all(int(np.dot(row, indicator(g, T))) == b for T in F):
            return True
    return False


@dataclass(frozen=True)
class InteriorPoint:
    found: bool
    t_star: Fraction   # None when P cap 2M is empty
    x: tuple
    rounds: int


def interior_point_in_doubled_matching(g, with_odd_sets=True, max_rounds=500):
    """Search for a point of relint P(G) inside 2M(G) (or inside the degree
    halfspaces only) by maximizing the minimal strict slack ``t``.

    Rows of the vertex-subset system are added on demand (cutting planes);
    the LP is exact, so ``t* > 0`` decides non-emptiness.
    """
    g.require_connected()
    m = g.m
    inc, rank, union, size = _vertex_subset_table(g)
    blocks = biconnected_components(g)
    # variables: x_0..x_{m-1}, t
    A_eq, b_eq = [], []
    for comp, verts in zip(blocks.components, blocks.vertex_sets(g)):
        row = [0] * (m + 1)
        for i in comp:
            row[i] = 1
        A_eq.append(row)
        b_eq.append(len(verts) - 1)
    A_ub, b_ub = [], []
    for e in range(m):
        row = [0] * (m + 1)
        row[e] = -1
        row[m] = 1
        A_ub.append(row)
        b_ub.append(0)
    for v in range(g.n):
        row = [0] * (m + 1)
        for i in g.incident[v]:
            row[i] = 1
        A_ub.append(row)
        b_ub.append(2)
    strict_mask = (~union) & (inc.any(axis=1))
    odd_mask = (size % 2 == 1) & (size >= 3) & inc.any(axis=1)
    if not with_odd_sets:
        odd_mask[:] = False
    added = set()
    c = [0] * m + [1]
    rounds = 0
    while True:
        rounds += 1
        if rounds > max_rounds:
            raise ResourceError(f"cutting-plane loop exceeded {max_rounds} rounds")
        res = solve_lp_revised(c, A_ub, b_ub, A_eq, b_eq)
        if res.status == "infeasible":
            return InteriorPoint(False, None, None, rounds)
        if not res.optimal:
            raise ResourceError(f"interior-point LP ended with status {res.status}")
        x = list(res.x[:m])
        t = res.x[m]
        lhs, d = _apply(inc, x, exact.common_denominator(x + [t]))
        tD = int(t * d)
        # strict P rows: x(E(S)) + t <= rank ; odd rows: x(E(U)) <= |U| - 1
        viol_p = strict_mask & (lhs + tD > _scaled(rank, d))
        viol_o = odd_mask & (lhs > _scaled(size - 1, d))
        new = 0
        for S in np.nonzero(viol_p)[0][:16]:
            key = ("p", int(S))
            if key in added:
                continue
            added.add(key)
            A_ub.append([int(v) for v in inc[S]] + [1])
            b_ub.append(int(rank[S]))
            new += 1
        for S in np.nonzero(viol_o)[0][:16]:
            key = ("o", int(S))
            if key in added:
                continue
            added.add(key)
            A_ub.append([int(v) for v in inc[S]] + [0])
            b_ub.append(int(size[S] - 1))
            new += 1
        if new == 0:
            return InteriorPoint(t > 0, t, tuple(x), rounds)


# -- Theta: integer points, cycle characterization, Hamiltonian paths -----------------

def theta_integer_points(g, k=1):
    """Integer points of ``k * Theta(G)``.

    Depth-first assignment of ``0..k`` per edge, pruned by the degree bound
    ``2k``, the total ``k(|V|-1)`` and the covering bound ``x(delta(v)) >= k``;
    each complete candidate is checked against the full P and 2M systems.
    """
    if not isinstance(k, int) or k < 1:
        raise ParameterError(f"dilation k must be a positive integer, got {k!r}")
    g.require_connected()
    n, m = g.n, g.m
    target = k * (n - 1)
    inc, rank, union, size = _vertex_subset_table(g)
    odd = (size % 2 == 1) & (size >= 3)
    nonempty = inc.any(axis=1)
    inc64 = inc.astype(np.int64)
    last_edge = [max(g.incident[v]) if g.incident[v] else -1 for v in range(n)]
    closing = [[] for _ in range(m)]
    for v in range(n):
        if last_edge[v] >= 0:
            closing[last_edge[v]].append(v)
    x = [0] * m
    deg = [0] * n
    out = []

    def accept():
        X = np.array(x, dtype=np.int64)
        s = inc64 @ X
        if np.any(nonempty & (s > k * rank)):
            return False
        if np.any(odd & (s > k * (size - 1))):
            return False
        return True

    def rec(e, total):
        if e == m:
            if total == target and accept():
                out.append(tuple(x))
            return
        if total + k * (m - e) < target:
            return
        u, v = g.edges[e]
        hi = min(k, target - total, 2 * k - deg[u], 2 * k - deg[v])
        for val in range(hi, -1, -1):
            x[e] = val
            deg[u] += val
            deg[v] += val
            if all(deg[w] >= k for w in closing[e]):
                rec(e + 1, total + val)
            deg[u] -= val
            deg[v] -= val
        x[e] = 0

    if n == 1:
        return [()]
    rec(0, 0)
    out.sort(reverse=True)
    return out


def theta_equals_P(g):
    """For biconnected ``g``: does every vertex ``e_T`` of P(G) lie in 2M(G)?"""
    if not is_biconnected(g):
        raise PreconditionError(f"{g!r} is not biconnected")
    for T in enumerate_spanning_trees(g):
        if not membership(g, indicator(g, T), TWO_M).member:
            return False
    return True


@dataclass(frozen=True)
class HamiltonianBound:
    paths: int
    affinely_independent: int   # size of a largest affinely independent subset
    affine_dimension: int
    needed: int                 # |E| - #blocks = dim P(G)
    rn_implied: bool


def independent_hamiltonian_path_bound(g):
    paths = hamiltonian_paths(g)
    blocks = biconnected_components(g)
    needed = g.m - len(blocks.components)
    if not paths:
        return HamiltonianBound(0, 0, -1, needed, False)
    base = indicator(g, paths[0])
    diffs = [[a - b for a, b in zip(indicator(g, P_), base)] for P_ in paths[1:]]
    dim = exact.rank(diffs) if diffs else 0
    return HamiltonianBound(len(paths), dim + 1, dim, needed, dim >= needed)


def integer_points_text(points):
    return "\n".join(" ".join(str(v) for v in p) for p in points)
