import functools
import os
import sys

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from rescurv.corpus import corpus  # noqa: E402
from rescurv.graph import Graph  # noqa: E402
from rescurv.rn import classify  # noqa: E402

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

CORPUS = corpus()
SMALL = [g for g in CORPUS if g.n <= 8]


@functools.lru_cache(maxsize=None)
def verdict(g):
    return classify(g)


@pytest.fixture(scope="session")
def corpus_graphs():
    return CORPUS


@st.composite
def connected_graphs(draw, min_n=2, max_n=6):
    """Random spanning tree plus a random set of extra edges."""
    n = draw(st.integers(min_n, max_n))
    edges = set()
    for v in range(1, n):
        u = draw(st.integers(0, v - 1))
        edges.add((u, v))
    others = [(u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in edges]
    if others:
        extra = draw(st.lists(st.sampled_from(others), unique=True, max_size=len(others)))
        edges.update(extra)
    return Graph(n, sorted(edges), name=f"random{n}")


@st.composite
def weighted_graphs(draw, min_n=2, max_n=6):
    from fractions import Fraction

    g = draw(connected_graphs(min_n, max_n))
    c = [Fraction(draw(st.integers(1, 20)), draw(st.integers(1, 10))) for _ in range(g.m)]
    return g, c


ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[k])
