"""Acceptance criteria 1-10, one test each; every test records a PASS/FAIL
line that is printed in the terminal summary.

Tolerances are fixed here and nowhere else.
"""

import random
import time
from fractions import Fraction as F

import numpy as np

from conftest import ACCEPTANCE, CORPUS, verdict
from oracles import dfs_has_hamiltonian_cycle, dfs_hamiltonian_path_count
from rescurv.capacity import full_table, is_submodular, pair_formula_holds, recover_graph
from rescurv.corpus import random_rational_weights
from rescurv.fitting import fit_weights
from rescurv.graph import (
    biconnected_components,
    complete,
    complete_bipartite,
    cycle,
    grid,
    hamiltonian_paths,
    is_one_tough,
    maximum_matching_size,
    path,
    petersen,
)
from rescurv.polytope import indicator, interior_point_in_doubled_matching, theta_integer_points
from rescurv.resistance import curvature, foster_check, normalize_weights, relative_resistances
from rescurv.rn import NOT_RN, RP, SRN, classify, witness_weights
from rescurv.transforms import (
    cinv_curvature_check,
    cinv_involution_holds,
    circle_invert,
    kron_curvature_check,
    kron_reduce,
    kron_sequence,
)

FOSTER_SECONDS = 60
VERDICT_SECONDS = 120
FIT_RESIDUAL = 1e-8
FIT_MAX_ITER = 10_000
FIT_REL_ERR = 1e-6
KRON_SAMPLES = 200
CINV_SAMPLES = 100
CAPACITY_SAMPLES = 50


def record(n, ok, detail):
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'} - {detail}"
    ACCEPTANCE[n] = line
    print(line)
    assert ok, line


def test_criterion_01_foster():
    assert len(CORPUS) == 25
    t0 = time.perf_counter()
    bad = []
    for g in CORPUS:
        rng = random.Random(f"foster-{g.name}")
        for _ in range(20):
            c = random_rational_weights(g, rng)
            rep = foster_check(g, c)
            if not (rep.total == g.n - 1 and rep.global_ok and rep.per_component_ok):
                bad.append(g.name)
    elapsed = time.perf_counter() - t0
    record(1, not bad and elapsed < FOSTER_SECONDS,
           f"Foster exact on 25 graphs x 20 weightings, failures {bad}, {elapsed:.1f}s (limit {FOSTER_SECONDS}s)")


def test_criterion_02_curvature_values():
    ok = all(curvature(cycle(n)) == [F(1, n)] * n for n in range(3, 11))
    ok &= curvature(complete_bipartite(2, 3)) == [0, 0, F(1, 3), F(1, 3), F(1, 3)]
    ok &= curvature(path(3)) == [F(1, 2), 0, F(1, 2)]
    record(2, ok, "p(C_n)=1/n for n=3..10, p(K2,3) and p(P3) exact")


def test_criterion_03_verdict_table():
    bowtie = next(g for g in CORPUS if g.name == "bowtie")
    c3c4 = next(g for g in CORPUS if g.name == "C3.C4")
    expected = [(cycle(n), RP) for n in range(3, 9)]
    expected += [(petersen(), RP), (complete(4), RP)]
    expected += [(complete_bipartite(n, n + 1), SRN) for n in (1, 2, 3)]
    expected += [(complete_bipartite(2, 4), NOT_RN), (complete_bipartite(1, 3), NOT_RN)]
    expected += [(path(n), SRN) for n in range(3, 9)]
    expected += [(bowtie, NOT_RN), (c3c4, NOT_RN)]
    t0 = time.perf_counter()
    wrong = []
    for g, cls in expected:
        got = classify(g).cls
        if got != cls:
            wrong.append((g.name, got, cls))
    elapsed = time.perf_counter() - t0
    record(3, not wrong and elapsed < VERDICT_SECONDS,
           f"{len(expected)} verdicts, mismatches {wrong}, {elapsed:.1f}s (limit {VERDICT_SECONDS}s)")


def test_criterion_04_interior_route_and_matching():
    bad = []
    for g in CORPUS:
        v = verdict(g)
        ip = interior_point_in_doubled_matching(g)
        if v.rn != ip.found:
            bad.append((g.name, "route"))
        if v.rn and maximum_matching_size(g) < g.n // 2:
            bad.append((g.name, "matching"))
    record(4, not bad, f"RN iff relint P meets 2M, RN implies near-perfect matching on 25 graphs, failures {bad}")


HAMILTONIAN_PATH_COUNTS = {"K4": 12, "C4": 4, "K1,3": 0, "Petersen": 120}


def test_criterion_05_integer_points():
    bad = []
    graphs = CORPUS + [complete_bipartite(1, 3)]
    counts = {}
    for g in graphs:
        pts = sorted(theta_integer_points(g, 1))
        if pts != sorted(tuple(indicator(g, P)) for P in hamiltonian_paths(g)):
            bad.append(g.name)
        if len(pts) != dfs_hamiltonian_path_count(g):
            bad.append(g.name + " (count)")
        counts[g.name] = len(pts)
    frozen = {k: counts[k] for k in HAMILTONIAN_PATH_COUNTS}
    record(5, not bad and frozen == HAMILTONIAN_PATH_COUNTS,
           f"Theta integer points are Hamiltonian paths on {len(graphs)} graphs, counts {frozen}, failures {bad}")


def test_criterion_06_toughness_and_hamiltonicity():
    bad = []
    hamiltonian = []
    for g in CORPUS:
        v = verdict(g)
        if v.cls == RP and not is_one_tough(g).one_tough:
            bad.append((g.name, "not 1-tough"))
        if dfs_has_hamiltonian_cycle(g):
            hamiltonian.append(g.name)
            if v.cls != RP:
                bad.append((g.name, "Hamiltonian but " + v.cls))
    record(6, not bad, f"RP implies 1-tough; Hamiltonian graphs {hamiltonian} all RP; exceptions {bad}")


def _max_block_rel_err(g, c_fit, c0):
    """Max relative error after choosing the best scalar on every block."""
    c0 = np.array([float(v) for v in c0])
    worst = 0.0
    for comp in biconnected_components(g).components:
        idx = list(comp)
        q = np.asarray(c_fit)[idx] / c0[idx]
        s = (q.max() + q.min()) / 2
        worst = max(worst, float(np.max(np.abs(q / s - 1))))
    return worst


def test_criterion_07_fitting_round_trip():
    failures = []
    worst_iter, worst_err = 0, 0.0
    for g in CORPUS:
        rng = random.Random(f"fit-{g.name}")
        for k in range(10):
            c0 = random_rational_weights(g, rng)
            fit = fit_weights(g, relative_resistances(g, c0), tol=FIT_RESIDUAL, max_iter=FIT_MAX_ITER)
            err = _max_block_rel_err(g, fit.weights, c0)
            worst_iter, worst_err = max(worst_iter, fit.iterations), max(worst_err, err)
            if not (fit.converged and fit.residual <= FIT_RESIDUAL and err <= FIT_REL_ERR):
                failures.append((g.name, k, fit.iterations, f"{fit.residual:.1e}", f"{err:.1e}"))
    record(7, not failures,
           f"250 fits, residual <= {FIT_RESIDUAL} within {FIT_MAX_ITER} iterations and block error <= {FIT_REL_ERR}; "
           f"worst iterations {worst_iter}, worst error {worst_err:.1e}, failures {failures}")


def _cinv_instances():
    """Exact weights with p >= 0: unit weights where they work, otherwise
    fitted witness weights rounded to rationals and re-checked exactly."""
    out = []
    for g in CORPUS:
        if not verdict(g).rn:
            continue
        if min(curvature(g)) >= 0:
            out.append((g, [F(1)] * g.m))
            continue
        w = witness_weights(g, verdict(g).distribution)
        c = [F(x).limit_denominator(10**6) for x in w.weights]
        if min(curvature(g, c)) >= 0:
            out.append((g, c))
    return out


def test_criterion_08_transform_lemmas():
    rng = random.Random("transforms")
    bad = []
    for _ in range(KRON_SAMPLES):
        g = rng.choice([h for h in CORPUS if h.n >= 2])
        c = random_rational_weights(g, rng)
        rec = kron_reduce(g, c, [rng.randrange(g.n)])
        if not (kron_curvature_check(rec) and rec.checks["resistances_preserved"]):
            bad.append(("kron", g.name))
    for g in CORPUS:
        if g.n < 3:
            continue
        c = random_rational_weights(g, rng)
        U = rng.sample(range(g.n), rng.randint(2, min(3, g.n - 1)))
        whole = kron_reduce(g, c, U)
        for order in (U, U[::-1]):
            h, ch, labels = kron_sequence(g, c, order)
            if (h.edges, tuple(ch), labels) != (whole.graph_out.edges, tuple(whole.c_out), whole.labels):
                bad.append(("quotient", g.name))
    instances = _cinv_instances()
    for k in range(CINV_SAMPLES):
        g, c = instances[k % len(instances)]
        x = rng.randrange(g.n)
        rec = circle_invert(g, c, x)
        if not (cinv_curvature_check(rec) and min(rec.recomputed_p) >= 0):
            bad.append(("cinv", g.name, x))
    for g, c in instances:
        if not cinv_involution_holds(g, c, rng.randrange(g.n)):
            bad.append(("involution", g.name))
    names = [g.name for g, _ in instances]
    record(8, not bad, f"{KRON_SAMPLES} Kron lemma checks, quotient property on corpus, {CINV_SAMPLES} inversions "
                       f"and involution over {names}; failures {bad}")


def test_criterion_09_capacity():
    bad = []
    nonneg = 0
    graphs = [g for g in CORPUS if g.n <= 8]
    for g in graphs:
        rng = random.Random(f"capacity-{g.name}")
        for _ in range(CAPACITY_SAMPLES):
            c = normalize_weights(g, [rng.randint(1, 100) for _ in range(g.m)])
            t = full_table(g, c)  # checks monotonicity and range on construction
            if not all(0 <= v <= 1 for v in t.values) or not pair_formula_holds(t):
                bad.append((g.name, "table"))
            if min(curvature(g, c)) >= 0:
                nonneg += 1
                if not is_submodular(t).submodular:
                    bad.append((g.name, "Thm 7.5"))
            h, c2 = recover_graph(t)
            if h.edges != g.edges or c2 != tuple(c):
                bad.append((g.name, "recover"))
    record(9, not bad, f"{len(graphs)} graphs x {CAPACITY_SAMPLES} tables, {nonneg} with p >= 0 all submodular; "
                       f"failures {bad}")


def test_criterion_10_grid_probe():
    ok = all(verdict(grid(2, m)).cls == RP for m in range(2, 6))
    v = verdict(grid(3, 3))
    record(10, ok, f"P2 x P_m RP for m=2..5; P3 x P3 recorded as {v.cls} (t* = {v.t_star})")
