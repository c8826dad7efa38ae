"""Seeded instance and formula generators for tests, demos and the roundtrip harness.

Every function takes an explicit ``random.Random`` so runs are reproducible.
"""

from __future__ import annotations

import itertools
import random

from .cnf import CnfFormula
from .graph import Graph, MMInstance
from .treewidth import TreeDecomposition


def random_graph(rng: random.Random, n: int, p: float) -> Graph:
    return Graph(n, [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < p])


def random_subset(rng: random.Random, n: int, p: float = 0.3) -> frozenset:
    """Nonempty random subset of ``range(n)``."""
    out = {v for v in range(n) if rng.random() < p}
    if not out:
        out.add(rng.randrange(n))
    return frozenset(out)


def random_mm_instance(
    rng: random.Random,
    max_n: int = 12,
    probs=(0.2, 0.4),
    max_r: int = 5,
    max_k: int = 3,
) -> MMInstance:
    n = rng.randint(1, max_n)
    g = random_graph(rng, n, rng.choice(probs))
    return MMInstance(g, random_subset(rng, n), random_subset(rng, n), rng.randint(1, max_r), rng.randint(1, max_k))


def random_formula(rng: random.Random, max_vars: int = 3, max_clauses: int = 3) -> CnfFormula:
    n = rng.randint(1, max_vars)
    m = rng.randint(1, max_clauses)
    clauses = [tuple(rng.choice((1, -1)) * rng.randint(1, n) for _ in range(3)) for _ in range(m)]
    return CnfFormula(n, clauses)


def all_clauses(num_vars: int) -> list[tuple]:
    """Every 3-literal clause up to slot order, as sorted literal triples."""
    lits = sorted([v for v in range(1, num_vars + 1)] + [-v for v in range(1, num_vars + 1)])
    return list(itertools.combinations_with_replacement(lits, 3))


def all_formulas(num_vars: int, num_clauses: int):
    """Every formula with the given dimensions, clauses taken up to slot order."""
    for clauses in itertools.product(all_clauses(num_vars), repeat=num_clauses):
        yield CnfFormula(num_vars, list(clauses))


def ladder(length: int) -> Graph:
    """``length`` rungs; rung ``i`` joins ``2i`` (top) and ``2i+1`` (bottom)."""
    edges = [(2 * i, 2 * i + 1) for i in range(length)]
    for i in range(length - 1):
        edges += [(2 * i, 2 * i + 2), (2 * i + 1, 2 * i + 3)]
    return Graph(2 * length, edges)


def ladder_decomposition(length: int) -> TreeDecomposition:
    """Width-2 path decomposition of :func:`ladder`."""
    bags = []
    for i in range(length - 1):
        bags += [(2 * i, 2 * i + 1, 2 * i + 2), (2 * i + 1, 2 * i + 2, 2 * i + 3)]
    if not bags:
        bags = [tuple(range(2 * length))]
    return TreeDecomposition(tuple(bags), tuple((j, j + 1) for j in range(len(bags) - 1)))


def ladder_instance(length: int, r: int = 3) -> MMInstance:
    """Two pairs on a ladder: a short path at the left end and a long one to the right end.

    Needs ``length >= 5``; the answer is yes for ``r <= 4``.
    """
    if length < 5:
        raise ValueError("ladder_instance needs length >= 5")
    g = ladder(length)
    return MMInstance(g, frozenset({0, 8}), frozenset({3, 2 * length - 1}), r, 2)
