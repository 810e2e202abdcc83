import math
import warnings

import pytest

from pathdecomp.dense_decompose import (
    AttachedSpot,
    SizedForestRequest,
    SpotParams,
    complete_path_packing,
    decompose_dense_family,
    decompose_spot_with_attached,
    extract_full_paths,
    sized_forests,
    sized_forests_spread,
)
from pathdecomp.errors import PackingError, PreconditionError
from pathdecomp.forests import PathForest, path_edges
from pathdecomp.graph import gen_clique_union, gen_complete
from pathdecomp.verify import DenseSpotSpec, verify_edge_disjoint_paths

warnings.simplefilter("ignore")


def edges_of(paths):
    out = []
    for p in paths:
        out.extend(path_edges(p))
    return out


def test_packing_walecki_family():
    m = 12
    paths = complete_path_packing([m - 1] * (m // 2), m)
    es = edges_of(paths)
    assert len(es) == len(set(es)) == m * (m - 1) // 2


def test_packing_trivial():
    assert complete_path_packing([], 5) == []
    single = complete_path_packing([1], 5)
    assert len(single) == 1 and len(single[0]) == 2


def test_packing_mixed_lengths():
    paths = complete_path_packing([5, 4, 3, 2, 2], 8, seed=3)
    assert [len(p) - 1 for p in paths] == [5, 4, 3, 2, 2]
    es = edges_of(paths)
    assert len(es) == len(set(es))


def test_packing_preconditions():
    with pytest.raises(PreconditionError):
        complete_path_packing([9], 8)  # length > m-1
    with pytest.raises(PreconditionError):
        complete_path_packing([7] * 5, 8)  # total exceeds |E(K_8)|


def test_sized_forest_request_budget():
    with pytest.raises(PreconditionError):
        SizedForestRequest((10, 10), budget=15)


def test_sized_forests_exact_sizes():
    g = gen_complete(65)
    spec = DenseSpotSpec(0.1, 64, 2)
    req = SizedForestRequest((32, 45, 20), budget=500)
    fs = sized_forests(g, spec, req, seed=0, s_classes=8)
    assert [len(f.vertices()) for f in fs] == [32, 45, 20]
    cap = max(4, math.ceil(64 ** 0.9))
    assert all(len(f) <= cap for f in fs)
    allp = [p for f in fs for p in f.paths]
    assert verify_edge_disjoint_paths(g, allp).valid


def test_sized_forests_spread_caps_endpoints():
    g = gen_complete(65)
    spec = DenseSpotSpec(0.1, 64, 2)
    req = SizedForestRequest((30,) * 12, budget=500)
    fs = sized_forests_spread(g, spec, req, seed=1, eps=0.3, s_classes=8)
    counts = {}
    for f in fs:
        for p in f.paths:
            counts[p[0]] = counts.get(p[0], 0) + 1
            counts[p[-1]] = counts.get(p[-1], 0) + 1
    cap = max(4, math.ceil(64 ** 0.95))
    assert max(counts.values()) <= cap
    for i, f in enumerate(fs):
        assert 30 <= len(f.vertices()) <= math.ceil(1.3 * 30)


def test_spot_decomposition_clique():
    g = gen_complete(65)
    l_t = math.ceil(0.7 * 64)
    spot = AttachedSpot(set(range(65)), set(g.edges()), set(), [], 64)
    dec = decompose_spot_with_attached(spot, l_t, SpotParams(), seed=0)
    assert all(len(p) - 1 == l_t for p in dec.paths)
    assert verify_edge_disjoint_paths(g, dec.paths).valid
    covered = sum(len(p) - 1 for p in dec.paths)
    assert covered + len(dec.leftover) == g.m
    assert len(dec.leftover) <= 0.3 * 65 * 64


def test_spot_with_attached_path():
    # spot K_33 plus one attached path of length l_t - 1 entering at vertex 0
    k = 33
    d = 32
    l_t = math.ceil(0.7 * d)  # 23
    g = gen_complete(k)
    tail = tuple(range(k, k + l_t - 1)) + (0,)  # 22 edges, one endpoint in spot
    spot = AttachedSpot(set(range(k)), set(g.edges()), {0}, [tail], d)
    dec = decompose_spot_with_attached(spot, l_t, SpotParams(eps=0.3), seed=0)
    assert all(len(p) - 1 == l_t for p in dec.paths)
    # the attached edges were consumed first: at least one output path uses
    # an attached edge plus spot edges
    attached_edges = set(path_edges(tail))
    mixed = [
        p
        for p in dec.paths
        if set(path_edges(p)) & attached_edges
        and set(path_edges(p)) - attached_edges
    ]
    assert mixed, "attached path should be chopped together with spot edges"


def test_spot_rejects_infeasible_target():
    g = gen_complete(10)
    spot = AttachedSpot(set(range(10)), set(g.edges()), set(), [], 9)
    with pytest.raises(PreconditionError):
        decompose_spot_with_attached(spot, 11, SpotParams(), seed=0)


def test_attached_spot_validation():
    g = gen_complete(10)
    bad = AttachedSpot(
        set(range(10)), set(g.edges()), set(), [(10, 11, 0)], 9
    )  # attachment vertex 0 not in junk
    with pytest.raises(PreconditionError):
        bad.validate(0.5)


def test_extract_full_paths_conserves():
    g = gen_complete(12)
    paths, rest = extract_full_paths(set(g.edges()), 5, seed=0)
    es = edges_of(paths)
    assert len(es) == len(set(es))
    assert set(es) | rest == g.edge_set()
    assert all(len(p) - 1 == 5 for p in paths)


def test_family_single_spot_reduces():
    g = gen_clique_union(1, 33)
    l_t = math.ceil(0.7 * 32)
    fam = decompose_dense_family(
        g, [tuple(range(33))], [set()], [], l_t, 32, SpotParams(), seed=0
    )
    assert all(len(p) - 1 == l_t for p in fam.paths)
    assert verify_edge_disjoint_paths(g, fam.paths).valid
    covered = sum(len(p) - 1 for p in fam.paths)
    assert covered + len(fam.leftover) == g.m


def test_family_empty_trivial():
    g = gen_clique_union(1, 5)
    fam = decompose_dense_family(g, [], [], [], 10, 10, SpotParams(), seed=0)
    assert fam.paths == [] and fam.leftover == set()


def test_family_two_spots_with_bridge_path():
    # two K_33 spots, one forest path running between their X-sets
    g0 = gen_clique_union(2, 33)
    d = 32
    l_t = math.ceil(0.7 * d)
    from pathdecomp.graph import Graph

    edges = list(g0.edges()) + [(0, 33)]
    g = Graph(66, edges)
    spots = [tuple(range(33)), tuple(range(33, 66))]
    x_sets = [{0}, {33}]
    forests = [PathForest([(0, 33)])]
    fam = decompose_dense_family(
        g, spots, x_sets, forests, l_t, d, SpotParams(), seed=0
    )
    assert all(len(p) - 1 == l_t for p in fam.paths)
    assert verify_edge_disjoint_paths(g, fam.paths).valid
    covered = sum(len(p) - 1 for p in fam.paths)
    assert covered + len(fam.leftover) == g.m
