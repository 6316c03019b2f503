"""Weighted Laplacians, effective and relative resistances, curvature.

Two arithmetic modes run through every function:

* ``"exact"``: weights are :class:`~fractions.Fraction` and all results are
  exact rationals (matrices as lists of rows).
* ``"numeric"``: weights are floats and results are numpy arrays.

The mode is inferred from the weights unless given explicitly.
"""

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import exact
from .errors import ConsistencyError, ParameterError, PreconditionError
from .graph import biconnected_components, enumerate_spanning_trees, TREE_CAP

EXACT = "exact"
NUMERIC = "numeric"

SYMMETRY_TOL = 1e-9
NORMALIZATION_TOL = 1e-12
FOSTER_TOL = 1e-9


def infer_mode(c):
    for x in c:
        if isinstance(x, (float, np.floating)):
            return NUMERIC
    return EXACT


def weights(g, c=None, mode=None):
    """Validate a weight vector for ``g``; ``None`` means unit weights.

    Returns a tuple of Fractions (exact) or a float array (numeric).
    """
    if c is None:
        c = [1] * g.m
    c = list(c)
    if len(c) != g.m:
        raise ParameterError(f"weight vector has length {len(c)}, graph has {g.m} edges")
    if mode is None:
        mode = infer_mode(c)
    if mode == EXACT:
        if any(isinstance(x, (float, np.floating)) for x in c):
            raise ParameterError("exact mode does not accept float weights; use rationals")
        out = tuple(exact.frac(x) for x in c)
        if any(x <= 0 for x in out):
            raise ParameterError("weights must be strictly positive")
        return out
    if mode == NUMERIC:
        arr = np.array([float(x) for x in c], dtype=float)
        if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
            raise ParameterError("weights must be finite and strictly positive")
        return arr
    raise ParameterError(f"unknown mode {mode!r}")


def mode_of(c):
    return NUMERIC if isinstance(c, np.ndarray) else EXACT


def laplacian(g, c=None, mode=None):
    """``L_uv = -c_uv`` on edges, zero off the edges, row sums zero."""
    c = weights(g, c, mode)
    n = g.n
    if mode_of(c) == NUMERIC:
        L = np.zeros((n, n))
        for (u, v), w in zip(g.edges, c):
            L[u, v] -= w
            L[v, u] -= w
            L[u, u] += w
            L[v, v] += w
        return L
    L = [[Fraction(0)] * n for _ in range(n)]
    for (u, v), w in zip(g.edges, c):
        L[u][v] -= w
        L[v][u] -= w
        L[u][u] += w
        L[v][v] += w
    return L


def _bordered_inverse(L):
    """``(L + 11^T/n)^{-1}``; the pseudoinverse differs from it by ``11^T/n``."""
    n = len(L)
    if isinstance(L, np.ndarray):
        return np.linalg.inv(L + 1.0 / n)
    shift = Fraction(1, n)
    return exact.inverse([[x + shift for x in row] for row in L])


def pseudoinverse(L):
    n = len(L)
    M = _bordered_inverse(L)
    if isinstance(M, np.ndarray):
        return M - 1.0 / n
    shift = Fraction(1, n)
    return [[x - shift for x in row] for row in M]


def _omega_from(M):
    n = len(M)
    if isinstance(M, np.ndarray):
        d = np.diag(M)
        W = d[:, None] + d[None, :] - 2 * M
        np.fill_diagonal(W, 0.0)
        return W
    return [[M[u][u] + M[v][v] - 2 * M[u][v] for v in range(n)] for u in range(n)]


def effective_resistances(g, c=None, mode=None):
    """Full resistance matrix ``omega_uv = Ld_uu + Ld_vv - 2 Ld_uv``."""
    g.require_connected()
    L = laplacian(g, c, mode)
    return _omega_from(_bordered_inverse(L))


def relative_resistances(g, c=None, mode=None, cross_check=False, trees=None):
    """``r_e = omega_e c_e`` per edge.

    With ``cross_check`` (exact mode only) the values are recomputed from
    the spanning-tree ratio and any mismatch raises ``ConsistencyError``.
    """
    c = weights(g, c, mode)
    W = effective_resistances(g, c)
    if mode_of(c) == NUMERIC:
        us = np.array([e[0] for e in g.edges], dtype=int)
        vs = np.array([e[1] for e in g.edges], dtype=int)
        return W[us, vs] * c if g.m else np.zeros(0)
    r = [W[u][v] * w for (u, v), w in zip(g.edges, c)]
    if cross_check:
        other = relative_resistances_from_trees(g, c, trees=trees)
        if other != r:
            raise ConsistencyError(f"pseudoinverse and tree-ratio resistances disagree on {g!r}")
    return r


def relative_resistances_from_trees(g, c=None, trees=None, cap=TREE_CAP):
    """Ratio of weighted tree sums containing each edge to the Kirchhoff polynomial."""
    c = weights(g, c, EXACT)
    if trees is None:
        trees = enumerate_spanning_trees(g, cap)
    num = [Fraction(0)] * g.m
    Z = Fraction(0)
    for T in trees:
        w = Fraction(1)
        for i in T:
            w *= c[i]
        Z += w
        for i in T:
            num[i] += w
    return [x / Z for x in num]


def curvature_from_r(g, r):
    half = Fraction(1, 2) if not isinstance(r, np.ndarray) else 0.5
    p = [1 - half * sum(r[i] for i in g.incident[v]) for v in range(g.n)]
    return np.array(p) if isinstance(r, np.ndarray) else p


def curvature(g, c=None, mode=None):
    """Resistance curvature ``p_v = 1 - (1/2) sum_{u~v} r_uv``."""
    return curvature_from_r(g, relative_resistances(g, c, mode))


@dataclass(frozen=True)
class ResistanceProfile:
    laplacian: object
    pseudoinverse: object
    omega: object
    K: object
    r: object
    p: object
    mode: str

    def to_json(self):
        return {
            "mode": self.mode,
            "laplacian": _jsonable(self.laplacian),
            "pseudoinverse": _jsonable(self.pseudoinverse),
            "omega": _jsonable(self.omega),
            "K": _jsonable(self.K),
            "r": _jsonable(self.r),
            "p": _jsonable(self.p),
        }


def _jsonable(x):
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return str(x)
    return x


def profile(g, c=None, mode=None):
    """Compute L, its pseudoinverse, Omega, K = Omega^{-1}, r and p at once."""
    g.require_connected()
    c = weights(g, c, mode)
    L = laplacian(g, c)
    M = _bordered_inverse(L)
    n = g.n
    W = _omega_from(M)
    if mode_of(c) == NUMERIC:
        Ld = M - 1.0 / n
        K = np.linalg.inv(W)
        us = np.array([e[0] for e in g.edges], dtype=int)
        vs = np.array([e[1] for e in g.edges], dtype=int)
        r = W[us, vs] * c if g.m else np.zeros(0)
    else:
        shift = Fraction(1, n)
        Ld = [[x - shift for x in row] for row in M]
        K = exact.inverse(W)
        r = [W[u][v] * w for (u, v), w in zip(g.edges, c)]
    return ResistanceProfile(L, Ld, W, K, r, curvature_from_r(g, r), mode_of(c))


def inverse_resistance_matrix(g, c=None, mode=None):
    W = effective_resistances(g, c, mode)
    if isinstance(W, np.ndarray):
        return np.linalg.inv(W)
    return exact.inverse(W)


# -- Foster ------------------------------------------------------------------

@dataclass(frozen=True)
class FosterReport:
    global_ok: bool
    per_component_ok: bool
    total: object
    block_sums: tuple  # (sum of r on block, |U| - 1) per block


def foster_check(g, c=None, mode=None, r=None):
    """Check the global and block-local Foster identities."""
    c = weights(g, c, mode)
    if r is None:
        r = relative_resistances(g, c)
    numeric = mode_of(c) == NUMERIC

    def same(a, b):
        return abs(a - b) < FOSTER_TOL if numeric else a == b

    total = sum(r[i] for i in range(g.m)) if g.m else 0
    blocks = biconnected_components(g)
    sums = []
    ok = True
    for comp, verts in zip(blocks.components, blocks.vertex_sets(g)):
        s = sum(r[i] for i in comp)
        sums.append((s, len(verts) - 1))
        ok = ok and same(s, len(verts) - 1)
    return FosterReport(same(total, g.n - 1), ok, total, tuple(sums))


# -- Kirchhoff polynomial and tree distributions --------------------------------

def kirchhoff_polynomial(g, c=None, mode=None, route=None, trees=None):
    """``Z_G(c) = sum_T prod_{t in T} c_t``.

    ``route="trees"`` sums over enumerated trees (exact), ``route="det"``
    takes a cofactor of the weighted Laplacian. Default: trees in exact
    mode, determinant in numeric mode.
    """
    c = weights(g, c, mode)
    if route is None:
        route = "trees" if mode_of(c) == EXACT else "det"
    if route == "trees":
        if trees is None:
            trees = enumerate_spanning_trees(g)
        total = Fraction(0) if mode_of(c) == EXACT else 0.0
        for T in trees:
            w = Fraction(1) if mode_of(c) == EXACT else 1.0
            for i in T:
                w *= c[i]
            total += w
        return total
    if route == "det":
        g.require_connected()
        L = laplacian(g, c)
        if g.n == 1:
            return Fraction(1) if mode_of(c) == EXACT else 1.0
        if isinstance(L, np.ndarray):
            return float(np.linalg.det(L[1:, 1:]))
        return exact.det([row[1:] for row in L[1:]])
    raise ParameterError(f"unknown route {route!r}")


def kirchhoff_derivative_residual(g, c, h=1e-6):
    """Max over edges of ``|r_e Z - c_e dZ/dc_e|`` with central differences.

    Scaled by ``Z`` so that the value is a relative error.
    """
    c = weights(g, c, NUMERIC)
    Z = kirchhoff_polynomial(g, c, route="det")
    r = relative_resistances(g, c)
    worst = 0.0
    for e in range(g.m):
        step = h * c[e]
        up, dn = c.copy(), c.copy()
        up[e] += step
        dn[e] -= step
        dZ = (kirchhoff_polynomial(g, up, route="det") - kirchhoff_polynomial(g, dn, route="det")) / (2 * step)
        worst = max(worst, abs(r[e] * Z - c[e] * dZ) / Z)
    return worst


LOG_LINEAR = "log_linear"
POSITIVE = "positive"
NON_SEPARABLE = "non_separable"
GENERAL = "general"


@dataclass(frozen=True)
class TreeDistribution:
    """Probabilities aligned with a list of spanning trees."""

    trees: tuple
    probs: tuple
    kind: str = GENERAL

    def __post_init__(self):
        if len(self.trees) != len(self.probs):
            raise ParameterError("tree list and probability vector differ in length")
        if any(p < 0 for p in self.probs):
            raise ParameterError("negative probability")
        total = sum((p * k for p, k in Counter(self.probs).items()), 0)
        if isinstance(total, Fraction) or isinstance(total, int):
            if total != 1:
                raise ParameterError(f"probabilities sum to {total}, not 1")
        elif not math.isclose(total, 1.0, abs_tol=1e-9):
            raise ParameterError(f"probabilities sum to {total}, not 1")
        if self.kind in (POSITIVE, LOG_LINEAR) and any(p <= 0 for p in self.probs):
            raise ParameterError(f"{self.kind} distribution must be strictly positive")

    def to_json(self, g=None):
        out = []
        for T, p in zip(self.trees, self.probs):
            edges = [list(g.edges[i]) for i in T] if g is not None else list(T)
            out.append({"edges": edges, "prob": str(p)})
        return out


def log_linear_distribution(g, c=None, mode=None, trees=None):
    """``mu_c(T) = prod_{t in T} c_t / Z_G(c)`` over the canonical tree list."""
    c = weights(g, c, mode)
    if trees is None:
        trees = enumerate_spanning_trees(g)
    one = Fraction(1) if mode_of(c) == EXACT else 1.0
    raw = []
    for T in trees:
        w = one
        for i in T:
            w *= c[i]
        raw.append(w)
    Z = sum(raw)
    return TreeDistribution(tuple(trees), tuple(w / Z for w in raw), LOG_LINEAR)


def edge_marginals(g, mu, trees=None):
    """``x_e = sum_{T containing e} mu(T)``."""
    if trees is not None and tuple(trees) != tuple(mu.trees):
        raise ParameterError("distribution is not aligned with the given tree order")
    for T in mu.trees:
        if len(T) != g.n - 1 or any(not (0 <= i < g.m) for i in T):
            raise ParameterError("distribution support is not a set of spanning trees of this graph")
    zero = mu.probs[0] * 0 if mu.probs else Fraction(0)
    # integer edge counts per distinct probability keep large uniform-ish supports cheap
    counts = {}
    for T, p in zip(mu.trees, mu.probs):
        if p:
            row = counts.setdefault(p, [0] * g.m)
            for i in T:
                row[i] += 1
    x = [zero] * g.m
    for p, row in counts.items():
        for i, k in enumerate(row):
            if k:
                x[i] += p * k
    return x


# -- normalized weights and the K matrix -------------------------------------------

def _total(M):
    if isinstance(M, np.ndarray):
        return float(M.sum())
    return sum((sum(row) for row in M), Fraction(0))


def normalize_weights(g, c=None, mode=None):
    """Rescale ``c`` globally so that ``sum_{u,v} K_uv = 1``."""
    c = weights(g, c, mode)
    s = _total(inverse_resistance_matrix(g, c))
    if mode_of(c) == NUMERIC:
        return c / s
    return tuple(w / s for w in c)


def is_normalized(g, c=None, mode=None, K=None):
    c = weights(g, c, mode)
    if K is None:
        K = inverse_resistance_matrix(g, c)
    s = _total(K)
    if mode_of(c) == NUMERIC:
        return abs(s - 1) <= NORMALIZATION_TOL * max(1.0, g.n)
    return s == 1


def curvature_via_K(g, c=None, mode=None):
    """For normalized weights, ``p_v = sum_u K_uv``."""
    c = weights(g, c, mode)
    K = inverse_resistance_matrix(g, c)
    if not is_normalized(g, c, K=K):
        raise PreconditionError("weights are not normalized (sum of K entries differs from 1)")
    if isinstance(K, np.ndarray):
        return K.sum(axis=0)
    return [sum(K[u][v] for u in range(g.n)) for v in range(g.n)]


@dataclass(frozen=True)
class KSpaceReport:
    member: bool
    violations: tuple  # human-readable descriptions
    weights: object    # reconstructed weights on g's edges (None when not a member)
    laplacian: object


def laplacian_from_K(K):
    """``L = -2K + 2 (K1)(K1)^T``."""
    if isinstance(K, np.ndarray):
        s = K.sum(axis=1)
        return -2 * K + 2 * np.outer(s, s)
    n = len(K)
    s = [sum(row) for row in K]
    return [[-2 * K[u][v] + 2 * s[u] * s[v] for v in range(n)] for u in range(n)]


def kspace_membership(g, K):
    """Test the defining conditions of the set of normalized inverse
    resistance matrices of ``g``; on success reconstruct the Laplacian."""
    numeric = isinstance(K, np.ndarray)
    n = g.n
    if len(K) != n or any(len(row) != n for row in K):
        raise ParameterError(f"K must be {n}x{n}")
    if numeric:
        if abs(np.linalg.det(K)) < 1e-300 or np.linalg.matrix_rank(K) < n:
            raise ParameterError("K is singular")
    else:
        K = exact.to_fractions(K)
        if exact.det(K) == 0:
            raise ParameterError("K is singular")

    def eq(a, b):
        return abs(a - b) <= SYMMETRY_TOL if numeric else a == b

    def gt(a, b):
        return a - b > SYMMETRY_TOL if numeric else a > b

    bad = []
    for u in range(n):
        for v in range(u + 1, n):
            if not eq(K[u][v], K[v][u]):
                bad.append(f"K not symmetric at ({u},{v})")
    total = _total(K) if numeric else sum((sum(row) for row in K), Fraction(0))
    if not eq(total, 1):
        bad.append(f"sum of entries is {total}, not 1")
    s = [sum(K[u][w] for w in range(n)) for u in range(n)]
    for u in range(n):
        for v in range(u + 1, n):
            prod = s[u] * s[v]
            if g.has_edge(u, v):
                if not gt(K[u][v], prod):
                    bad.append(f"edge ({u},{v}): K_uv={K[u][v]} not > {prod}")
            elif not eq(K[u][v], prod):
                bad.append(f"non-edge ({u},{v}): K_uv={K[u][v]} != {prod}")
    if bad:
        return KSpaceReport(False, tuple(bad), None, None)
    L = laplacian_from_K(K)
    c = [-L[u][v] for u, v in g.edges]
    problems = []
    for u in range(n):
        if not eq(sum(L[u][w] for w in range(n)), 0):
            problems.append(f"reconstructed Laplacian row {u} does not sum to 0")
    if any((w <= 0) for w in c):
        problems.append("reconstructed weights not positive")
    if numeric:
        ev = np.linalg.eigvalsh((L + L.T) / 2)
        if ev.min() < -SYMMETRY_TOL or (ev > SYMMETRY_TOL).sum() != n - 1:
            problems.append("reconstructed Laplacian is not PSD with one-dimensional kernel")
    if problems:
        raise ConsistencyError("; ".join(problems))
    return KSpaceReport(True, (), np.array(c) if numeric else tuple(c), L)
