import random

import pytest

from pathdecomp.errors import BudgetError, PreconditionError
from pathdecomp.graph import Graph, gen_clique_union, gen_complete, gen_cycle
from pathdecomp.oracle import (
    OracleBudget,
    enumerate_cubic_graphs,
    exact_min_path_cover,
    exact_path_decomposition,
    has_perfect_matching,
    kotzig_check,
    moebius_ladder,
    petersen_graph,
    prism_graph,
)


def test_min_path_cover_examples():
    assert exact_min_path_cover(gen_complete(4)) == 1
    assert exact_min_path_cover(gen_clique_union(2, 4)) == 2
    assert exact_min_path_cover(Graph(3, [])) == 3


def test_min_path_cover_star():
    g = Graph(5, [(0, i) for i in range(1, 5)])
    assert exact_min_path_cover(g) == 3


def test_min_path_cover_budget():
    with pytest.raises(BudgetError):
        exact_min_path_cover(gen_complete(13))


def test_cover_monotone_under_edge_addition():
    rng = random.Random(5)
    for _ in range(8):
        n = 7
        edges = set()
        for _ in range(8):
            u, v = rng.sample(range(n), 2)
            edges.add((min(u, v), max(u, v)))
        g = Graph(n, edges)
        base = exact_min_path_cover(g)
        nonedges = [
            (u, v)
            for u in range(n)
            for v in range(u + 1, n)
            if (u, v) not in g.edge_set()
        ]
        if nonedges:
            u, v = nonedges[0]
            g2 = Graph(n, list(edges) + [(u, v)])
            assert exact_min_path_cover(g2) <= base


def test_path_decomposition_examples():
    assert exact_path_decomposition(gen_complete(4), 3) is True
    assert exact_path_decomposition(gen_complete(4), 4) is False  # 4 does not divide 6
    assert exact_path_decomposition(gen_cycle(6), 3) is True


def test_path_decomposition_divisibility():
    rng = random.Random(6)
    for _ in range(6):
        n = 7
        edges = {(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.4}
        g = Graph(n, edges)
        for ell in range(2, 6):
            if g.m % ell != 0:
                assert exact_path_decomposition(g, ell) is False


def test_kotzig_examples():
    assert kotzig_check(gen_complete(4)) == (True, True)
    k33 = Graph(6, [(i, 3 + j) for i in range(3) for j in range(3)])
    assert kotzig_check(k33) == (True, True)
    assert kotzig_check(petersen_graph()) == (True, True)


def test_kotzig_requires_cubic():
    with pytest.raises(PreconditionError):
        kotzig_check(gen_complete(5))


def test_perfect_matching_on_odd():
    assert has_perfect_matching(Graph(3, [(0, 1), (1, 2)])) is False


def test_enumeration_counts():
    assert len(enumerate_cubic_graphs(4)) == 1
    assert len(enumerate_cubic_graphs(6)) == 70  # labeled connected cubic


def test_classic_graphs_are_cubic():
    for g in (petersen_graph(), prism_graph(4), moebius_ladder(10)):
        assert g.is_regular(3)
