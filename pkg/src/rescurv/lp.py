"""Dense two-phase simplex over the rationals with Bland's pivoting rule.

Solves ``max c.x`` subject to ``A_ub x <= b_ub``, ``A_eq x = b_eq``,
``x >= 0``. Infeasible and unbounded programs are reported through
``LPResult.status``; only the iteration cap raises.

Dual values are read from the final tableau so that optimal solutions
come with a certificate: ``y_ub >= 0`` and free ``y_eq`` with
``A_ub^T y_ub + A_eq^T y_eq >= c`` and ``b.y`` equal to the optimum.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

import numpy as np

from .errors import ParameterError, ResourceError
from .exact import frac

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

MAX_ITER = 50_000


@dataclass(frozen=True)
class LPResult:
    status: str
    value: Fraction = None
    x: tuple = None
    dual_ub: tuple = None
    dual_eq: tuple = None
    iterations: int = 0

    @property
    def optimal(self):
        return self.status == OPTIMAL


class _Tableau:
    def __init__(self, rows, rhs, basis):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis

    def pivot(self, r, col):
        rows, rhs = self.rows, self.rhs
        prow = rows[r]
        piv = prow[col]
        if piv != 1:
            inv = 1 / piv
            prow = [v * inv if v else v for v in prow]
            rows[r] = prow
            rhs[r] *= inv
        nz = [j for j, v in enumerate(prow) if v]
        for i in range(len(rows)):
            if i == r:
                continue
            f = rows[i][col]
            if f:
                row = rows[i]
                for j in nz:
                    row[j] -= f * prow[j]
                rhs[i] -= f * rhs[r]
        self.basis[r] = col

    def reduced_costs(self, cost):
        """``cost_j - c_B . column_j`` for every column."""
        ncols = len(self.rows[0]) if self.rows else len(cost)
        red = list(cost)
        for i, b in enumerate(self.basis):
            cb = cost[b]
            if cb:
                row = self.rows[i]
                for j in range(ncols):
                    if row[j]:
                        red[j] -= cb * row[j]
        return red

    def run(self, cost, allowed, budget):
        """Maximize ``cost`` from the current basis; returns (status, iterations)."""
        it = 0
        while True:
            red = self.reduced_costs(cost)
            entering = next((j for j in range(len(red)) if allowed[j] and red[j] > 0), None)
            if entering is None:
                return OPTIMAL, it
            best = None
            for i, row in enumerate(self.rows):
                a = row[entering]
                if a > 0:
                    ratio = self.rhs[i] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return UNBOUNDED, it
            self.pivot(best[1], entering)
            it += 1
            if it > budget:
                raise ResourceError(f"simplex exceeded the iteration cap of {budget}")


def _matrix(A, ncols, name, keep_int=False):
    if A is None:
        return []
    out = []
    for row in A:
        row = [v if keep_int and type(v) is int else frac(v) for v in row]
        if len(row) != ncols:
            raise ParameterError(f"{name} row has {len(row)} entries, expected {ncols}")
        out.append(row)
    return out


def solve_lp(c, A_ub=None, b_ub=None, A_eq=None, b_eq=None, max_iter=MAX_ITER):
    """Maximize ``c.x`` over ``x >= 0`` with the given constraints, exactly."""
    c = [frac(v) for v in c]
    n = len(c)
    Aub = _matrix(A_ub, n, "A_ub")
    Aeq = _matrix(A_eq, n, "A_eq")
    bub = [frac(v) for v in (b_ub or [])]
    beq = [frac(v) for v in (b_eq or [])]
    if len(bub) != len(Aub) or len(beq) != len(Aeq):
        raise ParameterError("constraint matrix and right-hand side differ in length")
    mu, me = len(Aub), len(Aeq)
    m = mu + me
    # columns: x (n) | slacks (mu) | artificials (m, one per row; unused ones stay zero)
    ncols = n + mu + m
    zero = Fraction(0)
    rows, rhs, basis, flip = [], [], [], []
    identity_col = []
    needs_art = []
    for i in range(m):
        if i < mu:
            a, b = Aub[i], bub[i]
        else:
            a, b = Aeq[i - mu], beq[i - mu]
        f = -1 if b < 0 else 1
        row = [zero] * ncols
        for j, v in enumerate(a):
            row[j] = f * v
        if i < mu:
            row[n + i] = Fraction(f)
        if i < mu and f == 1:
            basis.append(n + i)
            identity_col.append(n + i)
            needs_art.append(False)
        else:
            row[n + mu + i] = Fraction(1)
            basis.append(n + mu + i)
            identity_col.append(n + mu + i)
            needs_art.append(True)
        rows.append(row)
        rhs.append(f * b)
        flip.append(f)
    tab = _Tableau(rows, rhs, basis)
    art_cols = {n + mu + i for i in range(m) if needs_art[i]}
    iters = 0
    if art_cols:
        phase1 = [zero] * ncols
        for j in art_cols:
            phase1[j] = Fraction(-1)
        allowed = [j < n + mu or j in art_cols for j in range(ncols)]
        status, it = tab.run(phase1, allowed, max_iter)
        iters += it
        infeas = sum((tab.rhs[i] for i, b in enumerate(tab.basis) if b in art_cols), zero)
        if infeas > 0:
            return LPResult(INFEASIBLE, iterations=iters)
        # drive zero-level artificials out of the basis where possible
        for i, b in enumerate(tab.basis):
            if b in art_cols:
                col = next((j for j in range(n + mu) if tab.rows[i][j] != 0), None)
                if col is not None:
                    tab.pivot(i, col)
    cost = c + [zero] * (mu + m)
    allowed = [j < n + mu for j in range(ncols)]
    status, it = tab.run(cost, allowed, max_iter - iters)
    iters += it
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED, iterations=iters)
    x = [zero] * ncols
    for i, b in enumerate(tab.basis):
        x[b] = tab.rhs[i]
    value = sum((c[j] * x[j] for j in range(n)), zero)
    # dual of the (row-flipped) system: y'_i = c_B B^{-1} e_i = -reduced cost of identity column i
    red = tab.reduced_costs(cost)
    y = [-red[identity_col[i]] * flip[i] for i in range(m)]
    return LPResult(OPTIMAL, value, tuple(x[:n]), tuple(y[:mu]), tuple(y[mu:]), iters)


def check_dual_certificate(c, A_ub, b_ub, A_eq, b_eq, y_ub, y_eq):
    """Return the dual objective if ``(y_ub, y_eq)`` is dual feasible, else ``None``.

    Weak duality then bounds the primal optimum by the returned value.
    """
    A_ub = A_ub or []
    A_eq = A_eq or []
    if any(frac(v) < 0 for v in y_ub):
        return None
    n = len(c)
    for j in range(n):
        s = sum((frac(A_ub[i][j]) * frac(y_ub[i]) for i in range(len(A_ub))), Fraction(0))
        s += sum((frac(A_eq[i][j]) * frac(y_eq[i]) for i in range(len(A_eq))), Fraction(0))
        if s < frac(c[j]):
            return None
    return sum((frac(b) * frac(y) for b, y in zip(b_ub or [], y_ub)), Fraction(0)) + sum(
        (frac(b) * frac(y) for b, y in zip(b_eq or [], y_eq)), Fraction(0)
    )


# -- revised simplex for programs with few rows and many columns ------------------------

DEGENERATE_SWITCH = 50


def _lcm_den(values):
    d = 1
    for v in values:
        if type(v) is not int:
            d = lcm(d, v.denominator)
    return d


class _Revised:
    """Exact basis inverse; float pricing proposes entering columns, every
    pivot and the final optimality test are decided in exact arithmetic."""

    def __init__(self, M, rhs, basis):
        self.M = M                      # object array of Python ints, rows x cols
        self.Mf = M.astype(float)
        self.m = M.shape[0]
        self.basis = basis
        self.Binv = [[Fraction(int(i == j)) for j in range(self.m)] for i in range(self.m)]
        self.xB = list(rhs)

    def column(self, j):
        return [int(v) for v in self.M[:, j]]

    def duals(self, cost):
        m = self.m
        y = [Fraction(0)] * m
        for k, b in enumerate(self.basis):
            cb = cost[b]
            if cb:
                row = self.Binv[k]
                for i in range(m):
                    if row[i]:
                        y[i] += cb * row[i]
        return y

    def reduced(self, cost, y, j):
        col = self.column(j)
        return cost[j] - sum((y[i] * col[i] for i in range(self.m) if col[i]), Fraction(0))

    def exact_reduced_all(self, cost_int, L, y):
        """Reduced costs times ``L * D`` for positive integers ``L`` (cost
        denominators, ``cost_int = L * cost``) and ``D`` (denominators of ``L * y``)."""
        Ly = [v * L for v in y]
        D = _lcm_den(Ly)
        Y = np.array([int(v * D) for v in Ly], dtype=object)
        return cost_int * D - self.M.T.dot(Y)

    def pivot(self, r, j):
        col = self.column(j)
        d = [sum((row[i] * col[i] for i in range(self.m) if col[i]), Fraction(0)) for row in self.Binv]
        piv = d[r]
        self.Binv[r] = [v / piv for v in self.Binv[r]]
        self.xB[r] /= piv
        pr, xr = self.Binv[r], self.xB[r]
        for k in range(self.m):
            if k != r and d[k]:
                f = d[k]
                self.Binv[k] = [a - f * b for a, b in zip(self.Binv[k], pr)]
                self.xB[k] -= f * xr
        self.basis[r] = j

    def direction(self, j):
        col = self.column(j)
        return [sum((row[i] * col[i] for i in range(self.m) if col[i]), Fraction(0)) for row in self.Binv]

    def run(self, cost, allowed, budget):
        costf = np.array([float(v) for v in cost])
        L = _lcm_den(cost)
        cost_int = np.array([int(v * L) for v in cost], dtype=object)
        allowed = np.asarray(allowed, dtype=bool)
        it, degenerate, bland = 0, 0, False
        while True:
            y = self.duals(cost)
            redf = costf - self.Mf.T @ np.array([float(v) for v in y])
            entering = None
            if not bland:
                cand = np.nonzero(allowed & (redf > 1e-12))[0]
                cand = cand[np.argsort(-redf[cand], kind="stable")]
                entering = next((int(j) for j in cand if self.reduced(cost, y, int(j)) > 0), None)
            if entering is None:
                # Bland's rule needs the smallest improving index, which only an exact pass can give
                exact_red = self.exact_reduced_all(cost_int, L, y)
                pos = [j for j in np.nonzero(allowed)[0] if exact_red[j] > 0]
                if not pos:
                    return OPTIMAL, it
                entering = int(pos[0]) if bland else int(max(pos, key=lambda j: redf[j]))
            d = self.direction(entering)
            best = None
            for k in range(self.m):
                if d[k] > 0:
                    key = (self.xB[k] / d[k], self.basis[k])
                    if best is None or key < best[0]:
                        best = (key, k)
            if best is None:
                return UNBOUNDED, it
            degenerate = degenerate + 1 if best[0][0] == 0 else 0
            if degenerate >= DEGENERATE_SWITCH:
                bland = True
            self.pivot(best[1], entering)
            it += 1
            if it > budget:
                raise ResourceError(f"simplex exceeded the iteration cap of {budget}")


def solve_lp_revised(c, A_ub=None, b_ub=None, A_eq=None, b_eq=None, max_iter=MAX_ITER):
    """Same contract as :func:`solve_lp`, suited to wide programs."""
    c = [frac(v) for v in c]
    n = len(c)
    Aub = _matrix(A_ub, n, "A_ub", keep_int=True)
    Aeq = _matrix(A_eq, n, "A_eq", keep_int=True)
    bub = [frac(v) for v in (b_ub or [])]
    beq = [frac(v) for v in (b_eq or [])]
    if len(bub) != len(Aub) or len(beq) != len(Aeq):
        raise ParameterError("constraint matrix and right-hand side differ in length")
    mu, me = len(Aub), len(Aeq)
    m = mu + me
    rows = Aub + Aeq
    rhs_in = bub + beq
    scale, flip = [], []
    for a, b in zip(rows, rhs_in):
        s = _lcm_den(a + [b])
        scale.append(s)
        flip.append(-1 if b < 0 else 1)
    arts = [i for i in range(m) if i >= mu or flip[i] < 0]
    ncols = n + mu + len(arts)
    M = np.zeros((m, ncols), dtype=object)
    M[:, :] = 0
    rhs, basis = [], []
    for i, (a, b) in enumerate(zip(rows, rhs_in)):
        f = flip[i] * scale[i]
        for j, v in enumerate(a):
            if v:
                M[i, j] = int(f * v)
        if i < mu:
            M[i, n + i] = flip[i]
        rhs.append(Fraction(int(f * b)))
    art_col = {}
    for k, i in enumerate(arts):
        art_col[i] = n + mu + k
        M[i, n + mu + k] = 1
    for i in range(m):
        basis.append(art_col.get(i, n + i))
    rs = _Revised(M, rhs, basis)
    zero = Fraction(0)
    iters = 0
    art_set = set(art_col.values())
    if art_set:
        phase1 = [zero] * ncols
        for j in art_set:
            phase1[j] = Fraction(-1)
        status, it = rs.run(phase1, [True] * ncols, max_iter)
        iters += it
        if sum((rs.xB[k] for k, b in enumerate(rs.basis) if b in art_set), zero) > 0:
            return LPResult(INFEASIBLE, iterations=iters)
        for k, b in enumerate(rs.basis):
            if b in art_set:
                row = rs.Binv[k]
                D = _lcm_den(row)
                vals = M.T[: n + mu].dot(np.array([int(v * D) for v in row], dtype=object))
                j = next((j for j in range(n + mu) if vals[j] != 0), None)
                if j is not None:
                    rs.pivot(k, j)
    cost = c + [zero] * (ncols - n)
    allowed = [j < n + mu for j in range(ncols)]
    status, it = rs.run(cost, allowed, max_iter - iters)
    iters += it
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED, iterations=iters)
    x = [zero] * ncols
    for k, b in enumerate(rs.basis):
        x[b] = rs.xB[k]
    value = sum((c[j] * x[j] for j in range(n)), zero)
    y = rs.duals(cost)
    y = [y[i] * scale[i] * flip[i] for i in range(m)]
    return LPResult(OPTIMAL, value, tuple(x[:n]), tuple(y[:mu]), tuple(y[mu:]), iters)
