import warnings

import pytest

from pathdecomp.dense_spots import (
    connect_forests_to_spots,
    find_maximal_dense_family,
    good_sample,
    is_approximable,
    iterated_sample_cores,
)
from pathdecomp.errors import PreconditionError
from pathdecomp.forests import PathForest
from pathdecomp.graph import Graph, gen_clique_union, gen_random_regular
from pathdecomp.verify import DenseSpotSpec, verify_edge_disjoint_paths


def test_family_on_clique_union():
    g = gen_clique_union(3, 9)
    fam = find_maximal_dense_family(g, DenseSpotSpec(0.1, 8, 2))
    assert len(fam.spots) == 3
    assert all(len(s) == 9 for s in fam.spots)


def test_family_empty_on_random_regular():
    g = gen_random_regular(200, 8, seed=5)
    fam = find_maximal_dense_family(g, DenseSpotSpec(0.1, 8, 2))
    assert fam.spots == []


def test_family_excludes_pendant_path():
    k9 = gen_clique_union(1, 9)
    edges = list(k9.edges()) + [(8, 9), (9, 10), (10, 11)]
    g = Graph(12, edges)
    fam = find_maximal_dense_family(g, DenseSpotSpec(0.2, 8, 2))
    assert len(fam.spots) == 1
    assert set(fam.spots[0]) == set(range(9))


def test_good_sample_certificates():
    g = gen_clique_union(2, 65)
    fam = find_maximal_dense_family(g, DenseSpotSpec(0.1, 64, 2))
    ss = good_sample(g, fam, p=0.05, gamma=0.95, k=4, eta=1.0, seed=3)
    assert ss.certificates["a1_ok"]
    assert ss.certificates["a2_ok"]
    assert ss.certificates["a3_sampled_ok"]
    assert len(ss.X) <= (1 + 0.95) * 0.05 * g.n
    per_spot = ss.per_spot(fam)
    assert all(len(s) >= 1 for s in per_spot)


def test_good_sample_full_inclusion():
    g = gen_clique_union(1, 20)
    fam = find_maximal_dense_family(g, DenseSpotSpec(0.1, 19, 2))
    ss = good_sample(g, fam, p=1.0, gamma=0.05, k=2, eta=1.0, seed=0)
    assert set(ss.X) == set(range(20))


def test_good_sample_spot_size_gate():
    g = gen_clique_union(1, 5)
    fam = find_maximal_dense_family(g, DenseSpotSpec(0.2, 4, 2))
    # force an out-of-range spot size by lying about d
    with pytest.raises(PreconditionError):
        good_sample(g, fam, p=0.5, gamma=0.9, k=2, eta=1.0, seed=0, d=64)


def test_approximable_single_neighborhood():
    g = gen_clique_union(1, 12)
    x = frozenset(range(0, 12, 2))
    h = {w for w in g.neighbors(0) if w in x}
    ok, wit = is_approximable(g, x, h, k=3, eta=1.0, pd=3.0)
    assert ok and len(wit) >= 1


def test_approximable_clique_slice():
    d = 10
    g = gen_clique_union(1, d + 1)
    x = frozenset(range(0, d + 1, 2))
    h = set(x) - {0}
    ok, _ = is_approximable(g, x, h, k=2, eta=1.0, pd=0.5 * d)
    assert ok


def test_not_approximable_scattered():
    # isolated-in-X far-apart vertices, k = 1, tight budget
    comps = gen_clique_union(4, 5)  # four far-apart cliques
    x = frozenset({0, 5, 10, 15})
    h = {0, 5, 10, 15}
    ok, wit = is_approximable(comps, x, h, k=1, eta=0.5, pd=2.0)
    assert not ok and wit is None


def test_iterated_cores_shrink():
    g = gen_clique_union(1, 30)
    x = frozenset(range(15))
    cores = iterated_sample_cores(g, x, pd=10, gamma=0.5, k=3)
    assert len(cores) == 4
    assert all(b <= a for a, b in zip(map(len, cores), map(len, cores[1:])))


def test_connect_empty_forests():
    g = gen_clique_union(2, 33)
    fam = find_maximal_dense_family(g, DenseSpotSpec(0.1, 32, 2))
    ss = good_sample(g, fam, p=0.1, gamma=1.2, k=3, eta=1.0, seed=1)
    forests = [PathForest() for _ in range(4)]
    res = connect_forests_to_spots(g, fam, ss, forests, k=3, seed=0)
    assert res.maximal
    assert all(len(f) == 0 for f in res.forests_prime)
    assert all(len(f) == 0 for f in res.forests_leftover)


def test_connect_seven_vertex_gadget():
    # two 2-paths whose four endpoints share a common X-neighbor; family empty
    # 0-1-2   3-4-5   hub 6 adjacent to 2 and 3
    g = Graph(7, [(0, 1), (1, 2), (3, 4), (4, 5), (2, 6), (6, 3)])
    from pathdecomp.dense_spots import DenseFamily, SampleSet

    fam = DenseFamily([], DenseSpotSpec(0.5, 2, 2))
    ss = SampleSet(frozenset({6}), 0.2, 1.0, 2, 1.0, 2.0, {})
    forests = [PathForest([(0, 1, 2), (3, 4, 5)])]
    res = connect_forests_to_spots(g, fam, ss, forests, k=2, seed=0)
    # one Q-connector of length 2 joins the two paths through the hub
    assert res.q_connectors == [1]
    assert res.forests_leftover[0].paths[0] in (
        (0, 1, 2, 6, 3, 4, 5),
        (5, 4, 3, 6, 2, 1, 0),
    )


def test_connect_attaches_to_spot():
    warnings.simplefilter("ignore")
    # K_9 spot, one 2-path outside ending adjacent to a spot X-vertex via X
    k9 = gen_clique_union(1, 9)
    edges = list(k9.edges()) + [(9, 10), (10, 11), (11, 0)]
    g = Graph(12, edges)
    from pathdecomp.dense_spots import DenseFamily, SampleSet

    fam = DenseFamily([tuple(range(9))], DenseSpotSpec(0.2, 8, 2))
    ss = SampleSet(frozenset({0, 2, 4}), 0.3, 1.0, 3, 1.0, 2.0, {})
    forests = [PathForest([(9, 10, 11)])]
    res = connect_forests_to_spots(g, fam, ss, forests, k=2, seed=0)
    # the path end 11 is adjacent to spot-X vertex 0: an R-connector of
    # length 1 attaches it
    assert sum(res.r_connectors) >= 1
    allp = [p for f in res.forests_prime + res.forests_leftover for p in f.paths]
    assert verify_edge_disjoint_paths(g, allp).valid
