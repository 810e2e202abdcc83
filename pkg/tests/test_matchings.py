import random

import pytest

from pathdecomp.errors import PreconditionError
from pathdecomp.forests import path_edges
from pathdecomp.graph import Graph, gen_complete_bipartite, gen_cycle
from pathdecomp.matchings import (
    bipartite_edge_coloring,
    bipartite_matchings,
    hopcroft_karp,
    ks_rotation_paths,
)


def is_matching(edges):
    seen = set()
    for u, v in edges:
        if u in seen or v in seen:
            return False
        seen.add(u)
        seen.add(v)
    return True


def test_rotation_small_cases():
    assert ks_rotation_paths(2) == [(0, 1)]
    paths = ks_rotation_paths(4)
    assert paths[0] == (0, 1, 3, 2)
    assert paths[1] == (1, 2, 0, 3)
    edges = {e for p in paths for e in path_edges(p)}
    assert len(edges) == 6


def test_rotation_s6():
    paths = ks_rotation_paths(6)
    assert len(paths) == 3
    edges = [e for p in paths for e in path_edges(p)]
    assert len(edges) == len(set(edges)) == 15
    ends = sorted([p[0] for p in paths] + [p[-1] for p in paths])
    assert ends == list(range(6))


def test_rotation_odd_rejected():
    with pytest.raises(PreconditionError):
        ks_rotation_paths(5)


def test_coloring_is_proper_and_exact():
    rng = random.Random(2)
    for trial in range(5):
        nl = nr = 12
        edges = {
            (u, nl + v)
            for u in range(nl)
            for v in range(nr)
            if rng.random() < 0.4
        }
        g = Graph(nl + nr, edges)
        classes = bipartite_edge_coloring(g, list(range(nl)), list(range(nl, nl + nr)))
        delta = max(g.degrees())
        assert len(classes) == delta
        covered = [e for c in classes for e in c]
        assert sorted(covered) == sorted(g.edges())
        for c in classes:
            assert is_matching(c)


def test_c4_two_perfect_matchings():
    # C_4 as bipartite 2-regular: classes {0,2} and {1,3}
    g = gen_cycle(4)
    fam = bipartite_matchings(g, [0, 2], [1, 3], d=2, n=2, gamma=0.5)
    assert len(fam.matchings) == 2
    assert all(len(m) == 2 for m in fam.matchings)


def test_kdd_perfect_matchings():
    d = 20
    g = gen_complete_bipartite(d, d)
    fam = bipartite_matchings(
        g, list(range(d)), list(range(d, 2 * d)), d=d, n=d, gamma=1.0 / d + 0.01
    )
    assert len(fam.matchings) == d
    assert all(len(m) == d for m in fam.matchings)


def test_peel_method_matches_surface():
    d = 8
    g = gen_complete_bipartite(d, d)
    fam = bipartite_matchings(
        g,
        list(range(d)),
        list(range(d, 2 * d)),
        d=d,
        n=d,
        gamma=0.2,
        method="peel",
        count=5,
    )
    assert len(fam.matchings) == 5
    assert all(is_matching(m) and len(m) == d for m in fam.matchings)
    union = [e for m in fam.matchings for e in m]
    assert len(union) == len(set(union))


def test_precondition_gate():
    g = gen_complete_bipartite(4, 4)
    with pytest.raises(PreconditionError):
        bipartite_matchings(g, [0, 1, 2, 3], [4, 5, 6, 7], d=4, n=4, gamma=0.1)
    # gamma*d = 0.4 < 1 -> gate


def test_hopcroft_karp_perfect():
    adj = [[0, 1], [1, 2], [0, 2]]
    match_l = hopcroft_karp(adj, 3, 3)
    assert sorted(match_l) == [0, 1, 2]
