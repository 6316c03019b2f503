"""Exact rational linear algebra on lists of :class:`fractions.Fraction`.

Matrices are plain lists of rows. Everything here is sign-exact, which is
what the decision procedures need; nothing tolerates rounding.
"""

from fractions import Fraction
from math import gcd, lcm

from .errors import ParameterError


def frac(x):
    """Convert ints, Fractions, decimal strings or ``"p/q"`` literals."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise ParameterError(f"not a number: {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParameterError(f"not a rational literal: {x!r}") from exc
    if isinstance(x, float):
        return Fraction(x)
    try:
        return Fraction(x)
    except TypeError as exc:
        raise ParameterError(f"not a number: {x!r}") from exc


def to_fractions(M):
    return [[frac(v) for v in row] for row in M]


def common_denominator(values):
    d = 1
    for v in values:
        d = lcm(d, Fraction(v).denominator)
    return d


def integer_rows(M):
    """Scale each row of a rational matrix by its own denominator lcm.

    Returns ``(rows, scales)`` with ``rows[i] = M[i] * scales[i]`` integral.
    """
    rows, scales = [], []
    for row in M:
        d = common_denominator(row)
        rows.append([int(Fraction(v) * d) for v in row])
        scales.append(d)
    return rows, scales


def bareiss_det(A):
    """Determinant of an integer matrix by fraction-free elimination."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(row) for row in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = M[k][k]
        for i in range(k + 1, n):
            mik = M[i][k]
            row_i, row_k = M[i], M[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - mik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * M[n - 1][n - 1]


def det(M):
    """Exact determinant of a rational matrix."""
    rows, scales = integer_rows(M)
    d = 1
    for s in scales:
        d *= s
    return Fraction(bareiss_det(rows), d)


def solve(A, B):
    """Solve ``A X = B`` exactly; ``B`` is a list of rows (n x k)."""
    n = len(A)
    M = [[frac(v) for v in A[i]] + [frac(v) for v in B[i]] for i in range(n)]
    width = len(M[0]) if M else 0
    for col in range(n):
        piv = None
        for r in range(col, n):
            if M[r][col] != 0:
                piv = r
                break
        if piv is None:
            raise ParameterError("singular matrix")
        M[col], M[piv] = M[piv], M[col]
        prow = M[col]
        inv = 1 / prow[col]
        if inv != 1:
            prow = [v * inv for v in prow]
            M[col] = prow
        for r in range(n):
            if r != col:
                f = M[r][col]
                if f:
                    row = M[r]
                    M[r] = [row[j] - f * prow[j] if prow[j] else row[j] for j in range(width)]
    return [row[n:] for row in M]


def inverse(A):
    n = len(A)
    eye = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    return solve(A, eye)


def matmul(A, B):
    cols = list(zip(*B))
    return [[sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in cols] for row in A]


def rank(rows):
    """Rank of a rational matrix, fraction-free over the integers."""
    M, _ = integer_rows(rows)
    M = [r for r in M if any(r)]
    if not M:
        return 0
    ncols = len(M[0])
    rk = 0
    for col in range(ncols):
        piv = None
        for r in range(rk, len(M)):
            if M[r][col] != 0:
                piv = r
                break
        if piv is None:
            continue
        M[rk], M[piv] = M[piv], M[rk]
        p = M[rk]
        for r in range(rk + 1, len(M)):
            f = M[r][col]
            if f:
                row = [p[col] * a - f * b for a, b in zip(M[r], p)]
                g = 0
                for v in row:
                    g = gcd(g, v)
                M[r] = [v // g for v in row] if g > 1 else row
        rk += 1
        if rk == len(M):
            break
    return rk


def inverse_total(A):
    """Return ``1^T A^{-1} 1`` for an invertible rational matrix.

    Uses the bordered determinant identity
    ``det([[A, 1], [1^T, 0]]) = -1^T adj(A) 1`` so that only two integer
    determinants are needed.
    """
    n = len(A)
    rows, scales = integer_rows(A)
    dA = bareiss_det(rows)
    if dA == 0:
        raise ParameterError("singular matrix")
    # bordered matrix: scale border entries by the row scale so rows stay integral
    bordered = [rows[i] + [scales[i]] for i in range(n)] + [[1] * n + [0]]
    dB = bareiss_det(bordered)
    # det(bordered_int) = prod(scales) * det([[A,1],[1,0]]) and det(rows) = prod(scales) * det(A)
    return Fraction(-dB, dA)
