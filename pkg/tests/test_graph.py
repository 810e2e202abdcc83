import pytest

from pathdecomp.errors import GenerationError, ParseError, PathdecompError
from pathdecomp.graph import (
    Graph,
    ekey,
    gen_clique_union,
    gen_complete,
    gen_random_regular,
    gen_regular_clique_bridge,
    induced_subgraph,
    load_graph,
    save_graph,
)


def test_load_two_edge_path(tmp_path):
    f = tmp_path / "g.txt"
    f.write_text("0 1\n1 2\n")
    g = load_graph(f)
    assert g.n == 3 and g.m == 2


def test_load_deduplicates(tmp_path):
    f = tmp_path / "g.txt"
    f.write_text("0 1\n0 1\n")
    g = load_graph(f)
    assert g.n == 2 and g.m == 1


def test_load_self_loop_fails(tmp_path):
    f = tmp_path / "g.txt"
    f.write_text("0 0\n")
    with pytest.raises(ParseError):
        load_graph(f)


def test_load_header_overrides(tmp_path):
    f = tmp_path / "g.txt"
    f.write_text("# n=5\n0 1\n")
    g = load_graph(f)
    assert g.n == 5 and g.m == 1


def test_load_parse_error_carries_line(tmp_path):
    f = tmp_path / "g.txt"
    f.write_text("0 1\nnope\n")
    with pytest.raises(ParseError) as exc:
        load_graph(f)
    assert exc.value.line == 2


def test_round_trip(tmp_path):
    g = gen_random_regular(30, 4, seed=9)
    f = tmp_path / "g.txt"
    save_graph(g, f)
    g2 = load_graph(f)
    assert g2.n == g.n
    assert g2.edge_set() == g.edge_set()


def test_gen_random_regular_degree_audit():
    g = gen_random_regular(8, 3, seed=1)
    assert all(g.degree(v) == 3 for v in range(8))
    for seed in range(5):
        g = gen_random_regular(50, 7, seed=seed)
        assert g.is_regular(7)


def test_gen_random_regular_k4():
    g = gen_random_regular(4, 3, seed=0)
    assert g.edge_set() == gen_complete(4).edge_set()


def test_gen_random_regular_infeasible():
    with pytest.raises(GenerationError):
        gen_random_regular(5, 3, seed=0)


def test_clique_union_counts():
    g = gen_clique_union(2, 4)
    assert g.n == 8 and g.m == 12 and g.is_regular(3)
    assert gen_clique_union(1, 2).m == 1
    g3 = gen_clique_union(3, 5)
    # 3 * C(5,2) = 30
    assert g3.n == 15 and g3.m == 30 and g3.is_regular(4)


def test_clique_union_preconditions():
    with pytest.raises(PathdecompError):
        gen_clique_union(0, 4)
    with pytest.raises(PathdecompError):
        gen_clique_union(2, 1)


def test_regular_bridge_gadget_is_regular():
    g = gen_regular_clique_bridge(9, 2)
    assert g.is_regular(8)
    assert g.has_edge(0, 9) and g.has_edge(1, 10)
    assert not g.has_edge(0, 1)


def test_induced_subgraph_id_map():
    g = gen_clique_union(2, 4)
    sub = induced_subgraph(g, [4, 5, 6])
    assert sub.graph.n == 3 and sub.graph.m == 3
    assert sub.lift_edge((0, 1)) == ekey(4, 5)
    inner = induced_subgraph(sub.graph, [1, 2])
    assert sub.compose(inner).to_parent == (5, 6)


def test_graph_rejects_bad_edges():
    with pytest.raises(PathdecompError):
        Graph(3, [(0, 0)])
    with pytest.raises(PathdecompError):
        Graph(3, [(0, 5)])
