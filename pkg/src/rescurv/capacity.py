"""Resistance capacity ``tau_U = 1/2 + 1/2 (1^T Omega[U]^{-1} 1)^{-1}``.

Defined for normalized weights (entries of ``K = Omega^{-1}`` sum to 1),
with ``tau_{} = 0`` and ``tau_{v} = 1/2``. Subsets are bitmasks: vertex
``v`` is bit ``v``.

All values are exact. ``Omega`` is scaled once to an integer matrix so that
each subset costs two fraction-free determinants.
"""

import random
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

import numpy as np

from . import exact
from .errors import ConsistencyError, DataError, ParameterError, PreconditionError, ResourceError
from .graph import Graph
from .resistance import EXACT, curvature, effective_resistances, is_normalized, normalize_weights, weights

MAX_VERTICES = 14
EXHAUSTIVE_PAIRS_MAX_VERTICES = 10
HALF = Fraction(1, 2)


def _mask(U):
    m = 0
    for v in U:
        m |= 1 << v
    return m


def _members(mask):
    out, v = [], 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return out


class _Scaled:
    """``Omega = W / D`` with ``W`` integral."""

    def __init__(self, omega):
        self.D = lcm(*(x.denominator for row in omega for x in row))
        self.W = [[int(x * self.D) for x in row] for row in omega]

    def tau(self, U):
        if len(U) == 0:
            return Fraction(0)
        if len(U) == 1:
            return HALF
        sub = [[self.W[a][b] for b in U] for a in U]
        d = exact.bareiss_det(sub)
        if d == 0:
            raise ConsistencyError(f"Omega[{list(U)}] is singular")
        bordered = [row + [1] for row in sub] + [[1] * len(U) + [0]]
        total = Fraction(-exact.bareiss_det(bordered), d) * self.D
        return HALF + HALF / total


def _prepare(g, c):
    g.require_connected()
    c = weights(g, c, EXACT)
    if not is_normalized(g, c):
        raise PreconditionError("resistance capacity needs normalized weights (sum of K entries equal to 1)")
    return c, _Scaled(effective_resistances(g, c))


def resistance_capacity(g, c_normalized, U):
    c, sc = _prepare(g, c_normalized)
    U = sorted(set(int(u) for u in U))
    if U and (U[0] < 0 or U[-1] >= g.n):
        raise ParameterError(f"subset contains a vertex outside 0..{g.n - 1}")
    return sc.tau(U)


@dataclass(frozen=True)
class CapacityTable:
    g: Graph
    c: tuple
    values: tuple  # indexed by bitmask

    @property
    def n(self):
        return self.g.n

    def __getitem__(self, U):
        return self.values[U if isinstance(U, int) else _mask(U)]

    def pair(self, u, v):
        return self.values[(1 << u) | (1 << v)]

    def to_json(self):
        return {
            "graph": self.g.to_json(),
            "weights": [str(w) for w in self.c],
            "table": [{"subset": m, "tau": str(t)} for m, t in enumerate(self.values)],
        }


def check_table(table):
    """Verify the boundary values, monotonicity and range; raise on failure."""
    n, f = table.n, table.values
    full = (1 << n) - 1
    if f[0] != 0 or f[full] != 1 or any(f[1 << v] != HALF for v in range(n)):
        raise ConsistencyError("capacity table has wrong boundary values")
    for m in range(1 << n):
        if not 0 <= f[m] <= 1:
            raise ConsistencyError(f"tau of subset {m} is {f[m]}, outside [0, 1]")
        for v in range(n):
            if not m >> v & 1 and f[m | 1 << v] < f[m]:
                raise ConsistencyError(f"tau decreases from subset {m} to {m | 1 << v}")
    return True


def full_table(g, c_normalized, max_vertices=MAX_VERTICES):
    if g.n > max_vertices:
        raise ResourceError(f"full capacity table needs |V| <= {max_vertices}, got {g.n}")
    c, sc = _prepare(g, c_normalized)
    vals = tuple(sc.tau(_members(m)) for m in range(1 << g.n))
    table = CapacityTable(g, c, vals)
    check_table(table)
    return table


@dataclass(frozen=True)
class SubmodularityReport:
    submodular: bool
    min_slack: Fraction
    pair: tuple  # (A, B) as bitmasks
    exhaustive: bool


def _int_values(values):
    D = lcm(*(Fraction(v).denominator for v in values))
    return np.array([int(Fraction(v) * D) for v in values], dtype=object), D


def submodularity(values, n, intersecting_only=False, exhaustive=None):
    """Minimum of ``f(A) + f(B) - f(A|B) - f(A&B)``.

    Exhaustive over all pairs for small ``n``; otherwise over the local
    pairs ``(S+i, S+j)``, which decide submodularity just as well but may
    report a larger minimum.
    """
    if exhaustive is None:
        exhaustive = n <= EXHAUSTIVE_PAIRS_MAX_VERTICES
    f, D = _int_values(values)
    N = 1 << n
    best = None
    if exhaustive:
        B = np.arange(N)
        for A in range(N):
            Bs = B[A + 1:] if not intersecting_only else B[A + 1:][(B[A + 1:] & A) != 0]
            if len(Bs) == 0:
                continue
            s = f[A] + f[Bs] - f[A | Bs] - f[A & Bs]
            k = int(np.argmin(s))
            if best is None or s[k] < best[0]:
                best = (s[k], (A, int(Bs[k])))
    else:
        for S in range(N):
            free = [v for v in range(n) if not S >> v & 1]
            if intersecting_only and S == 0:
                continue
            for a in range(len(free)):
                for b in range(a + 1, len(free)):
                    X, Y = S | 1 << free[a], S | 1 << free[b]
                    s = f[X] + f[Y] - f[X | Y] - f[S]
                    if best is None or s < best[0]:
                        best = (s, (X, Y))
    if best is None:
        return SubmodularityReport(True, Fraction(0), (0, 0), exhaustive)
    slack = Fraction(int(best[0]), D)
    return SubmodularityReport(slack >= 0, slack, best[1], exhaustive)


def is_submodular(table, exhaustive=None):
    return submodularity(table.values, table.n, exhaustive=exhaustive)


def sigma2(table):
    """``tau_U - 1/2`` on nonempty ``U``, ``0`` on the empty set."""
    return tuple(v - HALF if m else v for m, v in enumerate(table.values))


def pair_formula_holds(table, omega=None):
    """``tau_uv = 1/2 + omega_uv / 4`` on every pair."""
    if omega is None:
        omega = effective_resistances(table.g, table.c)
    n = table.n
    return all(table.pair(u, v) == HALF + omega[u][v] / 4 for u in range(n) for v in range(u + 1, n))


def recover_graph(table):
    """Rebuild ``(G, c)`` from the pair values of a table (or a dict
    ``{(u, v): tau_uv}`` with ``n`` inferred from the keys)."""
    if isinstance(table, CapacityTable):
        n = table.n
        pairs = {(u, v): table.pair(u, v) for u in range(n) for v in range(u + 1, n)}
    else:
        pairs = {tuple(sorted(k)): exact.frac(v) for k, v in table.items()}
        n = 1 + max(max(k) for k in pairs) if pairs else 1
    if n < 2:
        raise DataError("need at least two vertices to recover a graph")
    om = [[Fraction(0)] * n for _ in range(n)]
    for u in range(n):
        for v in range(u + 1, n):
            if (u, v) not in pairs:
                raise DataError(f"missing pair value for {(u, v)}")
            w = 4 * pairs[(u, v)] - 2
            if w <= 0:
                raise DataError(f"pair {(u, v)} gives non-positive resistance {w}")
            om[u][v] = om[v][u] = w
    try:
        K = exact.inverse(om)
    except ParameterError as exc:
        raise DataError("pair values give a singular resistance matrix") from exc
    s = [sum(row) for row in K]
    if sum(s) != 1:
        raise DataError(f"pair values are not normalized (sum of K entries is {sum(s)})")
    edges, c = [], []
    for u in range(n):
        for v in range(u + 1, n):
            L = -2 * K[u][v] + 2 * s[u] * s[v]
            if L > 0:
                raise DataError(f"reconstructed Laplacian has a positive off-diagonal entry at {(u, v)}")
            if L < 0:
                edges.append((u, v))
                c.append(-L)
    g = Graph(n, edges, name="recovered")
    if not g.is_connected():
        raise DataError("reconstructed graph is disconnected")
    if effective_resistances(g, c) != om:
        raise DataError("pair values are not the resistances of any weighted graph")
    return g, tuple(c)


def conjecture_search(g, samples, seed=0, max_vertices=MAX_VERTICES):
    """Sample integer weights in [1, 100], normalize, and cross-tabulate
    submodularity of the capacity against ``min_v p_v >= 0``.

    A sample with ``p >= 0`` and a non-submodular table is a theorem
    violation (a bug); a submodular table with ``min p < 0`` would be a
    counterexample to the conjectured converse.
    """
    if samples < 0:
        raise ParameterError("samples must be non-negative")
    g.require_connected()
    if g.n > max_vertices:
        raise ResourceError(f"conjecture search needs |V| <= {max_vertices}, got {g.n}")
    master = random.Random(seed)
    counts = {"submodular_and_nonneg": 0, "submodular_and_neg": 0,
              "nonsub_and_nonneg": 0, "nonsub_and_neg": 0}
    violations, counterexamples, min_p = [], [], []
    for _ in range(samples):
        rng = random.Random(master.getrandbits(64))
        c = normalize_weights(g, [rng.randint(1, 100) for _ in range(g.m)], EXACT)
        p = curvature(g, c)
        table = full_table(g, c, max_vertices)
        rep = is_submodular(table)
        nonneg = min(p) >= 0
        key = ("submodular" if rep.submodular else "nonsub") + ("_and_nonneg" if nonneg else "_and_neg")
        counts[key] += 1
        min_p.append(min(p))
        payload = {
            "weights": [str(w) for w in c],
            "curvature": [str(v) for v in p],
            "min_slack": str(rep.min_slack),
            "pair": list(rep.pair),
        }
        if nonneg and not rep.submodular:
            violations.append(payload)
        if rep.submodular and not nonneg:
            payload["table"] = table.to_json()["table"]
            counterexamples.append(payload)
    return {
        "graph": g.to_json(),
        "samples": samples,
        "seed": seed,
        "counts": counts,
        "thm_violations": violations,
        "counterexamples": counterexamples,
        "min_curvature_range": [str(min(min_p)), str(max(min_p))] if min_p else None,
    }
