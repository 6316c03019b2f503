"""The built-in test corpus and seeded random weights."""

import random
from fractions import Fraction

from .graph import complete, complete_bipartite, cycle, glue, grid, path, petersen


def corpus():
    """25 graphs: paths, cycles, small complete and complete bipartite
    graphs, the Petersen graph, grids up to 4x4 and two glued graphs."""
    gs = [path(n) for n in range(2, 7)]
    gs += [cycle(n) for n in range(3, 9)]
    gs += [complete(4), complete(5)]
    gs += [complete_bipartite(2, 3), complete_bipartite(2, 4), complete_bipartite(3, 3)]
    gs.append(petersen())
    gs += [grid(2, 3), grid(2, 4), grid(2, 5), grid(3, 3), grid(3, 4), grid(4, 4)]
    gs.append(glue(cycle(3), cycle(3), 0, 0, "bowtie"))
    gs.append(glue(cycle(3), cycle(4), 0, 0, "C3.C4"))
    return gs


def by_name():
    return {g.name: g for g in corpus()}


def random_rational_weights(g, rng, num=20, den=10):
    """Weights ``a/b`` with ``a`` in ``1..num`` and ``b`` in ``1..den``."""
    return [Fraction(rng.randint(1, num), rng.randint(1, den)) for _ in range(g.m)]


def random_integer_weights(g, rng, hi=100):
    return [Fraction(rng.randint(1, hi)) for _ in range(g.m)]


def rng(seed):
    return random.Random(seed)
