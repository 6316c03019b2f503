import itertools
import json
import random
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import weighted_graphs
from oracles import atlas_connected, batch_curvature
from rescurv.errors import ParameterError, PreconditionError
from rescurv.graph import Graph, complete, complete_bipartite, cycle, path, petersen
from rescurv.resistance import curvature, effective_resistances
from rescurv.rn import RP, SRN, classify
from rescurv.transforms import (
    CINV,
    KRON,
    cinv_commute_holds,
    cinv_curvature_check,
    cinv_involution_holds,
    circle_invert,
    kron_curvature_check,
    kron_reduce,
    kron_sequence,
    same_up_to_block_scaling,
)


def positive_instances(graphs, per_graph=1, seed=0, strict=True):
    """Exact rational weights with p > 0 (or p >= 0), found by float
    sampling and confirmed exactly."""
    out = []
    for g in graphs:
        rng = np.random.default_rng(seed + g.m * 31 + g.n)
        C = np.exp(rng.uniform(-2, 2, size=(4000, g.m)))
        pmin = batch_curvature(g, C).min(axis=1)
        found = 0
        for k in np.argsort(-pmin):
            if pmin[k] <= 1e-6 or found == per_graph:
                break
            c = [F(round(w * 1000), 1000) or F(1, 1000) for w in C[k]]
            p = curvature(g, c)
            if min(p) > 0 or (not strict and min(p) >= 0):
                out.append((g, c))
                found += 1
    return out


ATLAS = atlas_connected(6)
POSITIVE = positive_instances([g for g in ATLAS if g.n >= 3])


def test_positive_instances_cover_rp_atlas():
    rp = [g for g in ATLAS if g.n >= 3 and classify(g).cls == RP]
    assert len({g.edges for g, _ in POSITIVE}) == len(rp)


# -- Kron ------------------------------------------------------------------------------

def test_kron_examples():
    rec = kron_reduce(cycle(3), None, [2])
    assert rec.op == KRON and rec.graph_out.edges == ((0, 1),) and rec.c_out == (F(3, 2),)
    assert rec.labels == (0, 1)
    rec = kron_reduce(path(3), None, [1])
    assert rec.c_out == (F(1, 2),) and rec.labels == (0, 2)
    assert effective_resistances(rec.graph_out, rec.c_out)[0][1] == 2


def test_kron_rejects_bad_sets():
    with pytest.raises(PreconditionError):
        kron_reduce(cycle(3), None, [0, 1, 2])
    with pytest.raises(ParameterError):
        kron_reduce(cycle(3), None, [])
    with pytest.raises(ParameterError):
        kron_reduce(cycle(3), None, [5])


def test_kron_curvature_examples():
    rec = kron_reduce(cycle(3), None, [0])
    assert kron_curvature_check(rec) and rec.recomputed_p == [F(1, 2)] * 2
    assert rec.predicted_p == [F(1, 3) + F(1, 3) / 2] * 2
    rec = kron_reduce(path(3), None, [1])
    assert kron_curvature_check(rec) and rec.predicted_p == [F(1, 2)] * 2
    # p_x = 0 at the centre of a unit P_5: neighbours unchanged
    rec = kron_reduce(path(5), None, [2])
    assert rec.predicted_p == [F(1, 2), 0, 0, F(1, 2)] and kron_curvature_check(rec)


@given(weighted_graphs(min_n=3, max_n=6), st.integers(0, 10**6))
def test_kron_single_vertex_lemma_and_resistances(gc, seed):
    g, c = gc
    x = random.Random(seed).randrange(g.n)
    rec = kron_reduce(g, c, [x])
    assert kron_curvature_check(rec)
    assert rec.checks == {"schur_agrees": True, "resistances_preserved": True}


@given(weighted_graphs(min_n=3, max_n=6), st.integers(0, 10**6))
def test_kron_order_independence(gc, seed):
    g, c = gc
    rng = random.Random(seed)
    U = rng.sample(range(g.n), rng.randint(1, g.n - 1))
    whole = kron_reduce(g, c, U)
    h1, c1, l1 = kron_sequence(g, c, U)
    h2, c2, l2 = kron_sequence(g, c, U[::-1])
    assert l1 == l2 == whole.labels
    assert h1.edges == h2.edges == whole.graph_out.edges
    assert tuple(c1) == tuple(c2) == tuple(whole.c_out)


def test_kron_numeric_mode():
    g = petersen()
    c = np.linspace(1, 2, g.m)
    rec = kron_reduce(g, c, [0, 5])
    assert kron_curvature_check(rec) and rec.checks["resistances_preserved"]
    assert json.loads(json.dumps(rec.to_json()))["op"] == "kron"


@pytest.mark.parametrize("k", range(len(POSITIVE)))
def test_kron_preserves_positive_curvature(k):
    g, c = POSITIVE[k]
    for size in range(1, g.n - 1):
        for U in itertools.combinations(range(g.n), size):
            rec = kron_reduce(g, c, U)
            assert min(rec.recomputed_p) > 0


def test_kron_preserves_nonnegative_curvature():
    # unit weights on SRN graphs have p >= 0 with zeros
    for g in (path(4), complete_bipartite(2, 3)):
        assert min(curvature(g)) == 0
        for U in itertools.chain.from_iterable(itertools.combinations(range(g.n), k) for k in range(1, g.n - 1)):
            assert min(kron_reduce(g, None, U).recomputed_p) >= 0


def test_srn_probe_records_reduction_to_rp():
    """SRN is not closed under Kron reduction: recorded instances."""
    found = []
    for g, U in [(path(3), [1]), (complete_bipartite(2, 3), [0])]:
        assert classify(g).cls == SRN
        rec = kron_reduce(g, None, U)
        found.append((g.name, tuple(U), classify(rec.graph_out).cls))
    assert found == [("P3", (1,), RP), ("K2,3", (0,), RP)]


# -- circle inversion -----------------------------------------------------------------

def test_cinv_triangle():
    rec = circle_invert(cycle(3), None, 0)
    assert rec.op == CINV and rec.graph_out.edges == cycle(3).edges
    assert rec.c_out == (F(4, 9),) * 3
    assert cinv_curvature_check(rec) and rec.recomputed_p == [F(1, 3)] * 3


def test_cinv_zero_clause():
    rec = circle_invert(cycle(5), None, 0)
    assert rec.recomputed_p[2] == rec.recomputed_p[3] == 0
    assert rec.predicted_p[2] == 0 and cinv_curvature_check(rec)


def test_cinv_requires_nonnegative_curvature():
    with pytest.raises(PreconditionError):
        circle_invert(complete_bipartite(1, 3), None, 1)


def test_cinv_dominating_vertex_gives_rp():
    for g in (complete(4), complete(5), Graph(5, [(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (2, 3), (3, 4), (1, 4)])):
        rec = circle_invert(g, None, 0)
        assert curvature(g)[0] > 0
        assert classify(rec.graph_out).cls == RP


@pytest.mark.parametrize("k", range(0, len(POSITIVE), 3))
def test_cinv_lemma_and_rn_closure(k):
    g, c = POSITIVE[k]
    for x in range(g.n):
        rec = circle_invert(g, c, x)
        assert cinv_curvature_check(rec)
        assert min(rec.recomputed_p) >= 0
        assert all(w > 0 for w in rec.c_out)


@pytest.mark.parametrize("k", range(1, len(POSITIVE), 3))
def test_cinv_involution(k):
    g, c = POSITIVE[k]
    for x in range(g.n):
        assert cinv_involution_holds(g, c, x)


def test_cinv_involution_numeric():
    g = petersen()
    c = np.linspace(1, 1.5, g.m)
    assert min(curvature(g, c)) > 0
    assert cinv_involution_holds(g, c, 3, rel_tol=1e-9)


def test_cinv_commutation_symmetric_cases():
    for g in (cycle(5), complete(4), cycle(6)):
        assert cinv_commute_holds(g, [1] * g.m, 0, 2)


def test_cinv_commutation_fails_for_generic_weights():
    """Recorded: the two orders of inversion differ, even up to relabeling and scale."""
    k4 = complete(4)
    c = [5, 4, 5, 1, 5, 1]
    assert min(curvature(k4, c)) >= 0
    assert not cinv_commute_holds(k4, c, 0, 2)
    c5 = [2, 5, 5, 2, 3]
    assert min(curvature(cycle(5), c5)) >= 0
    assert not cinv_commute_holds(cycle(5), c5, 0, 2)


def test_block_scaling_helper():
    g = cycle(4)
    assert same_up_to_block_scaling(g, [1, 2, 3, 4], g, [2, 4, 6, 8])
    assert not same_up_to_block_scaling(g, [1, 2, 3, 4], g, [2, 4, 6, 9])
    assert not same_up_to_block_scaling(g, [1] * 4, complete(4), [1] * 6)
