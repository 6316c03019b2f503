import json
import random
from fractions import Fraction as F

import pytest

from conftest import SMALL
from rescurv.capacity import (
    CapacityTable,
    conjecture_search,
    full_table,
    is_submodular,
    pair_formula_holds,
    recover_graph,
    resistance_capacity,
    sigma2,
    submodularity,
)
from rescurv.errors import DataError, ParameterError, PreconditionError, ResourceError
from rescurv.graph import complete, complete_bipartite, cycle, grid, path
from rescurv.resistance import curvature, effective_resistances, normalize_weights

K5_WEIGHTS = [
    F(69918908713144, 1484396092773015), F(1188621448123448, 1484396092773015),
    F(227236453317718, 1484396092773015), F(227236453317718, 296879218554603),
    F(646749905596582, 1484396092773015), F(402033725100578, 1484396092773015),
    F(1083743085053732, 1484396092773015), F(69918908713144, 494798697591005),
    F(314635089209148, 494798697591005), F(139837817426288, 494798697591005),
]


def _normalized(g, rng):
    return normalize_weights(g, [rng.randint(1, 100) for _ in range(g.m)])


def test_capacity_examples():
    g = cycle(4)
    c = normalize_weights(g, [1, 2, 3, 4])
    om = effective_resistances(g, c)
    assert resistance_capacity(g, c, []) == 0
    assert resistance_capacity(g, c, [2]) == F(1, 2)
    assert resistance_capacity(g, c, [0, 2]) == F(1, 2) + om[0][2] / 4
    assert resistance_capacity(g, c, range(4)) == 1


def test_capacity_needs_normalized_weights():
    with pytest.raises(PreconditionError):
        resistance_capacity(cycle(3), [1, 1, 1], [0, 1])
    with pytest.raises(ParameterError):
        resistance_capacity(cycle(3), normalize_weights(cycle(3)), [0, 7])


def test_full_table_examples():
    t = full_table(path(2), normalize_weights(path(2)))
    assert t.values == (0, F(1, 2), F(1, 2), 1)
    t = full_table(cycle(3), normalize_weights(cycle(3)))
    assert len({t.pair(0, 1), t.pair(0, 2), t.pair(1, 2)}) == 1
    assert t[[]] <= t[[0]] <= t[[0, 1]] <= t[[0, 1, 2]]
    with pytest.raises(ResourceError):
        full_table(grid(3, 5), normalize_weights(grid(3, 5)))


def test_table_json():
    t = full_table(path(2), normalize_weights(path(2)))
    data = json.loads(json.dumps(t.to_json()))
    assert data["table"] == [{"subset": 0, "tau": "0"}, {"subset": 1, "tau": "1/2"},
                             {"subset": 2, "tau": "1/2"}, {"subset": 3, "tau": "1"}]


def test_submodularity_examples():
    t = full_table(cycle(3), normalize_weights(cycle(3)))
    assert is_submodular(t).submodular
    for a in range(3):
        for b in range(a + 1, 3):
            assert t[[a]] + t[[b]] == 1 >= t[[a, b]]
    s = sigma2(t)
    assert s[0b011] > 0 and s[0b001] + s[0b010] == 0
    rep = submodularity(s, 3)
    assert not rep.submodular and rep.min_slack < 0


def test_local_and_exhaustive_checks_agree():
    rng = random.Random(9)
    for g in (cycle(5), complete_bipartite(2, 3), complete(4)):
        for _ in range(5):
            t = full_table(g, _normalized(g, rng))
            a, b = is_submodular(t, exhaustive=True), is_submodular(t, exhaustive=False)
            assert a.submodular == b.submodular and a.min_slack <= b.min_slack


@pytest.mark.parametrize("g", SMALL, ids=lambda h: h.name)
def test_capacity_invariants_and_theorem(g):
    """Range, monotonicity (checked on construction), pair formula, and
    submodularity of every table with nonnegative curvature."""
    rng = random.Random(g.name)
    for _ in range(10):
        c = _normalized(g, rng)
        t = full_table(g, c)
        assert all(0 <= v <= 1 for v in t.values)
        assert pair_formula_holds(t)
        if min(curvature(g, c)) >= 0:
            assert is_submodular(t).submodular
            assert submodularity(sigma2(t), g.n, intersecting_only=True).submodular


def test_sigma2_intersecting_property_needs_nonnegative_curvature():
    """Recorded: with p < 0 somewhere, sigma^2 can fail on intersecting pairs."""
    g = complete_bipartite(2, 4)
    c = normalize_weights(g, [1] * g.m)
    assert min(curvature(g, c)) < 0
    rep = submodularity(sigma2(full_table(g, c)), g.n, intersecting_only=True)
    assert not rep.submodular and rep.pair[0] & rep.pair[1]


@pytest.mark.parametrize("g", [cycle(3), complete_bipartite(2, 3), grid(2, 3), path(4)], ids=lambda h: h.name)
def test_recover_round_trip(g):
    c = normalize_weights(g, [i + 1 for i in range(g.m)])
    h, c2 = recover_graph(full_table(g, c))
    assert h.edges == g.edges and c2 == tuple(c)


def test_recover_from_pair_dict():
    g = cycle(3)
    t = full_table(g, normalize_weights(g, [1, 2, 3]))
    pairs = {(u, v): t.pair(u, v) for u in range(3) for v in range(u + 1, 3)}
    assert recover_graph(pairs)[0].edges == g.edges


def test_recover_rejects_corrupted_tables():
    g = cycle(3)
    t = full_table(g, normalize_weights(g))
    vals = list(t.values)
    vals[0b011] += 1
    with pytest.raises(DataError):
        recover_graph(CapacityTable(g, t.c, tuple(vals)))
    with pytest.raises(DataError):
        recover_graph({(0, 1): F(1, 2), (0, 2): F(3, 4), (1, 2): F(3, 4)})
    with pytest.raises(DataError):
        recover_graph({(0, 1): F(3, 4)})


def test_conjecture_search_examples():
    rep = conjecture_search(cycle(3), 100, seed=0)
    assert rep["thm_violations"] == [] and sum(rep["counts"].values()) == 100
    assert set(rep["counts"]) == {"submodular_and_nonneg", "submodular_and_neg",
                                  "nonsub_and_nonneg", "nonsub_and_neg"}
    rep = conjecture_search(complete_bipartite(2, 4), 100, seed=0)
    assert rep["counts"]["submodular_and_nonneg"] + rep["counts"]["nonsub_and_nonneg"] == 0
    assert conjecture_search(cycle(3), 0)["min_curvature_range"] is None
    json.dumps(rep)


def test_conjecture_search_is_deterministic():
    assert conjecture_search(cycle(4), 5, seed=3) == conjecture_search(cycle(4), 5, seed=3)


def test_k5_counterexample_to_submodular_converse():
    """Recorded: a submodular capacity table whose curvature is negative
    at one vertex, found by conjecture_search(K5, 20, seed=1)."""
    g = complete(5)
    p = curvature(g, K5_WEIGHTS)
    assert p[4] == F(-198823, 19895702) and min(p) == p[4]
    t = full_table(g, K5_WEIGHTS)
    rep = is_submodular(t)
    assert rep.submodular and rep.min_slack == 0
    found = conjecture_search(g, 20, seed=1)["counterexamples"]
    assert [F(w) for w in found[0]["weights"]] == K5_WEIGHTS
