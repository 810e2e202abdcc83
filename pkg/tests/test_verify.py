import random

import pytest

from pathdecomp.errors import PathdecompError
from pathdecomp.forests import PathForest, forest_from_edges, forest_sum, chop_path
from pathdecomp.graph import gen_complete, gen_cycle, gen_random_regular
from pathdecomp.matchings import ks_rotation_paths
from pathdecomp.verify import (
    BoundednessSpec,
    DenseSpotSpec,
    check_bounded,
    check_dense_spot,
    verify_edge_disjoint_paths,
)


def test_k4_two_hamilton_paths_valid():
    g = gen_complete(4)
    paths = ks_rotation_paths(4)
    rep = verify_edge_disjoint_paths(g, paths)
    assert rep.valid and rep.edges_covered == 6


def test_reused_edge_flagged():
    g = gen_complete(4)
    rep = verify_edge_disjoint_paths(g, [(0, 1, 2), (1, 2, 3)])
    assert not rep.valid
    assert (1, 2) in rep.reused_edges


def test_empty_family_valid():
    g = gen_cycle(5)
    rep = verify_edge_disjoint_paths(g, [])
    assert rep.valid and rep.edges_covered == 0


def test_nonedge_and_nonsimple():
    g = gen_cycle(6)
    rep = verify_edge_disjoint_paths(g, [(0, 2), (1, 1)])
    assert not rep.valid
    assert (0, 2) in rep.nonedges
    assert 1 in rep.nonsimple


def test_valid_implies_length_bound():
    rng = random.Random(4)
    for _ in range(20):
        g = gen_random_regular(24, 4, seed=rng.randrange(10**6))
        paths = ks_rotation_paths(4)  # vertices 0..3 exist in g
        rep = verify_edge_disjoint_paths(g, paths)
        if rep.valid:
            assert sum(len(p) - 1 for p in paths) <= g.m


def test_check_bounded_simple():
    g = gen_complete(6)
    f = PathForest([(0, 1, 2)])
    assert check_bounded([f], BoundednessSpec(1, 2, 6), g).ok
    f2 = PathForest([(0, 1), (2, 3), (4, 5)])
    rep = check_bounded([f2], BoundednessSpec(2, 2, 6), g)
    assert not rep.ok  # three paths exceed m=2


def test_check_bounded_endpoint_totals():
    g = gen_complete(8)
    forests = [PathForest([(0, 1), (0, 2)][i : i + 1] * 0 or [(0, i + 1)]) for i in range(6)]
    # six forests all ending at vertex 0
    rep = check_bounded(forests, BoundednessSpec(1, 5, 8), g)
    assert not rep.ok


def test_check_bounded_monotone():
    rng = random.Random(11)
    g = gen_random_regular(30, 6, seed=3)
    forests = []
    used = set()
    for _ in range(3):
        f = PathForest()
        verts = rng.sample(range(30), 12)
        for i in range(0, 12, 3):
            a, b, c = verts[i : i + 3]
            if g.has_edge(a, b) and g.has_edge(b, c):
                f.add_path((a, b, c))
        forests.append(f)
    base = BoundednessSpec(5, 4, 6)
    ok0 = check_bounded(forests, base, g).ok
    relaxed = BoundednessSpec(base.m + 3, base.delta0 + 3, base.delta1 + 3)
    ok1 = check_bounded(forests, relaxed, g).ok
    if ok0:
        assert ok1  # relaxing never flips true -> false


def test_dense_spot_examples():
    d = 8
    g = gen_complete(d + 1)
    assert check_dense_spot(g, range(d + 1), DenseSpotSpec(0.0, d, 2))
    # remove one edge: two vertices drop to d-1
    edges = set(g.edges())
    edges.discard((0, 1))
    from pathdecomp.graph import Graph

    g2 = Graph(d + 1, edges)
    assert not check_dense_spot(g2, range(d + 1), DenseSpotSpec(0.0, d, 2))
    c8 = gen_cycle(8)
    assert check_dense_spot(c8, [0, 1, 2, 3], DenseSpotSpec(0.5, 2, 2))
    assert not check_dense_spot(c8, [], DenseSpotSpec(0.5, 2, 2))


def test_forest_vertex_disjointness_enforced():
    f = PathForest([(0, 1, 2)])
    with pytest.raises(PathdecompError):
        f.add_path((2, 3))


def test_forest_sum_and_reassembly():
    a = PathForest([(0, 1), (3, 4)])
    b = PathForest([(1, 2, 3)])
    s = forest_sum(a, b)
    assert len(s) == 1 and s.paths[0] in ((0, 1, 2, 3, 4), (4, 3, 2, 1, 0))
    with pytest.raises(PathdecompError):
        forest_from_edges({(0, 1), (1, 2), (2, 0)})


def test_chop_path():
    p = tuple(range(11))  # 10 edges
    pieces, leftover = chop_path(p, 4)
    assert [len(q) - 1 for q in pieces] == [4, 4]
    assert len(leftover) == 2
