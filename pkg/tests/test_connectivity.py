import pytest

from pathdecomp.connectivity import (
    ConnectivitySpec,
    check_connectivity,
    connector_set,
    edge_disjoint_short_paths,
    partition_connected,
    short_path,
)
from pathdecomp.errors import CertificateError, PreconditionError
from pathdecomp.graph import (
    Graph,
    gen_clique_union,
    gen_complete,
    gen_cycle,
)


def crossing_gadget(k: int, c: int) -> Graph:
    """Two K_k blobs plus c crossing edges."""
    base = gen_clique_union(2, k)
    edges = list(base.edges()) + [(i, k + i) for i in range(c)]
    return Graph(2 * k, edges)


def test_complete_graph_connected():
    cert = check_connectivity(gen_complete(30), ConnectivitySpec(0.1, 0.01, 20))
    assert cert.connected


def test_bridge_witness_sound():
    g = crossing_gadget(20, 1)
    spec = ConnectivitySpec(0.1, 0.01, 20)
    cert = check_connectivity(g, spec)
    assert not cert.connected
    w = cert.witness
    assert len(w.edges) == 1 and len(w.side_a) == 20 and len(w.side_b) == 20
    cut = set(w.edges)
    for u in w.side_a:
        for v in g.neighbors(u):
            assert v not in w.side_b or (min(u, v), max(u, v)) in cut


def test_trivially_connected_small():
    g = Graph(3, [(0, 1), (1, 2)])
    cert = check_connectivity(g, ConnectivitySpec(1.0, 0.01, 2))
    assert cert.connected and cert.trivial


def test_partition_clique_single_piece():
    part = partition_connected(gen_complete(65), beta=0.1, d=64, K=2, lam=0.01)
    assert len(part.pieces) == 1
    assert not part.junk and not part.deleted_edges


def test_partition_two_blobs():
    g = crossing_gadget(30, 2)
    part = partition_connected(g, beta=0.25, d=28, K=2.5, lam=0.01)
    assert sorted(len(p) for p in part.pieces) == [30, 30]
    assert len(part.deleted_edges) == 2
    # edge conservation: internal piece edges + deleted = all edges
    internal = sum(
        1
        for u, v in g.edges()
        if any(u in p and v in p for p in part.pieces)
    )
    assert internal + len(part.deleted_edges) == g.m


def test_partition_density_gate():
    g = gen_cycle(30)
    with pytest.raises(PreconditionError):
        partition_connected(g, beta=0.3, d=10, K=3, lam=0.01)


def test_short_path_examples():
    g = gen_complete(10)
    spec = ConnectivitySpec(0.1, 0.5, 9)
    p = short_path(g, {0}, {5}, spec, K=1.2)
    assert len(p) == 2
    p0 = short_path(g, {0, 1}, {1, 2}, spec, K=1.2)
    assert p0 == (1,)


def test_short_path_certificate_error():
    # two blobs, no crossing edges: certificate claim is broken
    g = crossing_gadget(10, 0)
    spec = ConnectivitySpec(0.05, 0.9, 10)
    with pytest.raises(CertificateError):
        short_path(g, set(range(10)), set(range(10, 20)), spec, K=2)


def test_edge_disjoint_crossing_counts():
    for c in range(1, 5):
        g = crossing_gadget(20, c)
        fam = edge_disjoint_short_paths(
            g, set(range(20)), set(range(20, 40)), ConnectivitySpec(0.1, 0.01, 20), K=2
        )
        assert len(fam.paths) == c
        edges = [
            (min(a, b), max(a, b))
            for p in fam.paths
            for a, b in zip(p, p[1:])
        ]
        assert len(edges) == len(set(edges))


def test_edge_disjoint_u_equals_v():
    g = gen_complete(6)
    fam = edge_disjoint_short_paths(
        g, {0, 1, 2}, {0, 1, 2}, ConnectivitySpec(0.2, 0.3, 5), K=1.5
    )
    zero_len = [p for p in fam.paths if len(p) == 1]
    assert len(zero_len) == 3


def test_connector_set_clique():
    g = gen_complete(65)
    w = connector_set(
        g, ConnectivitySpec(0.1, 0.05, 64), K=1.2, q=0.001, eps=0.05,
        seed=1, pair_count=20,
    )
    assert w.certificate_ok
    assert 1 <= len(w.vertices) <= 2 * 0.05 * 65
    assert all(cnt >= w.target for _, _, cnt in w.pair_sample)
