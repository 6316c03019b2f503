"""Recover edge weights from target relative resistances.

Multiplicative scaling: ``c_e <- c_e * (r_e / rhat_e) ** (1 / (|V| - 1))``
followed by recomputing ``rhat`` from the new weights, until the max-norm
residual drops below ``tol``. Weights are only determined up to one scalar
per block, so results are reported with the largest weight of every block
scaled to 1.
"""

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import ParameterError, PreconditionError
from .graph import biconnected_components
from .polytope import membership, tree_system, P_INTERIOR
from .resistance import EXACT, NUMERIC, relative_resistances, weights

DEFAULT_TOL = 1e-9
DEFAULT_MAX_ITER = 100_000
INTERIOR_TOL = 1e-9


@dataclass(frozen=True)
class FitResult:
    weights: np.ndarray
    iterations: int
    residual: float
    converged: bool
    trace: tuple = field(default=(), repr=False)

    def to_json(self, with_trace=False):
        out = {
            "weights": [float(v) for v in self.weights],
            "iterations": self.iterations,
            "residual": self.residual,
            "converged": self.converged,
        }
        if with_trace:
            out["trace"] = list(self.trace)
        return out


def _numeric_interior(g, r):
    """Relative-interior test for float targets: implicit equalities within
    ``INTERIOR_TOL``, every other row strictly satisfied."""
    sysP = tree_system(g)
    lhs = sysP.A.astype(float) @ r
    b = sysP.bound.astype(float)
    for i, kind in enumerate(sysP.kind):
        if kind == "tree_equality":
            if abs(lhs[i] - b[i]) > INTERIOR_TOL * max(1.0, b[i]):
                return False
        elif kind == "nonneg":
            if not lhs[i] > 0:
                return False
        elif not lhs[i] < b[i]:
            return False
    return True


def block_normalize(g, c):
    """Scale each block so that its largest weight is 1."""
    c = np.array(c, dtype=float)
    for comp in biconnected_components(g).components:
        idx = list(comp)
        c[idx] /= c[idx].max()
    return c


def fit_weights(g, target_r, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER, init=None, seed=None,
                trace=False, callback=None):
    """Iterative scaling from all-ones weights (or seeded random ones when
    ``init="random"``) towards weights with relative resistances ``target_r``.

    ``callback(iteration, c, rhat)`` is called after every update."""
    g.require_connected()
    if not tol > 0:
        raise ParameterError("tol must be positive")
    if len(target_r) != g.m:
        raise ParameterError(f"target has length {len(target_r)}, graph has {g.m} edges")
    if all(isinstance(v, (int, Fraction)) for v in target_r):
        if not membership(g, target_r, P_INTERIOR).member:
            raise PreconditionError("target is not in the relative interior of the spanning tree polytope")
        r = np.array([float(v) for v in target_r])
    else:
        r = np.array([float(v) for v in target_r])
        if not _numeric_interior(g, r):
            raise PreconditionError("target is not in the relative interior of the spanning tree polytope")
    if g.m == g.n - 1:
        return FitResult(np.ones(g.m), 0, float(np.max(np.abs(r - 1))) if g.m else 0.0, True, (0.0,))
    if init == "random":
        rng = np.random.default_rng(seed)
        c = rng.uniform(0.5, 2.0, g.m)
    elif init is None:
        c = np.ones(g.m)
    else:
        c = weights(g, init, NUMERIC).copy()
    expo = 1.0 / (g.n - 1)
    rhat = relative_resistances(g, c, NUMERIC)
    res = float(np.max(np.abs(rhat - r)))
    hist = [res]
    it = 0
    while res > tol and it < max_iter:
        c = c * (r / rhat) ** expo
        c /= c.max()
        rhat = relative_resistances(g, c, NUMERIC)
        res = float(np.max(np.abs(rhat - r)))
        it += 1
        if callback is not None:
            callback(it, c, rhat)
        if trace:
            hist.append(res)
    return FitResult(block_normalize(g, c), it, res, res <= tol, tuple(hist))


def blockwise_proportional(g, c1, c2, rel_tol=None):
    """Is ``c1 / c2`` constant on every block? Exact for rational input."""
    for comp in biconnected_components(g).components:
        ratios = [c1[i] / c2[i] for i in comp]
        if rel_tol is None:
            if any(q != ratios[0] for q in ratios):
                return False
        elif any(abs(q / ratios[0] - 1) > rel_tol for q in ratios):
            return False
    return True


def check_birch_uniqueness(g, c1, c2, tol=1e-10):
    """Return whether ``r(c1) == r(c2)``, after asserting that this happens
    exactly when the weights agree up to one scalar per block."""
    from .errors import ConsistencyError

    w1, w2 = weights(g, c1), weights(g, c2)
    exact_mode = not isinstance(w1, np.ndarray) and not isinstance(w2, np.ndarray)
    if exact_mode:
        same = relative_resistances(g, w1, EXACT) == relative_resistances(g, w2, EXACT)
        prop = blockwise_proportional(g, w1, w2)
    else:
        a = relative_resistances(g, weights(g, [float(v) for v in w1], NUMERIC))
        b = relative_resistances(g, weights(g, [float(v) for v in w2], NUMERIC))
        same = bool(np.max(np.abs(a - b)) <= tol) if g.m else True
        prop = blockwise_proportional(g, [float(v) for v in w1], [float(v) for v in w2], rel_tol=1e-8)
    if same != prop:
        raise ConsistencyError(
            f"uniqueness violated on {g!r}: equal resistances={same}, blockwise proportional={prop}")
    return same
