import warnings

import pytest

from pathdecomp.errors import PreconditionError
from pathdecomp.graph import (
    Graph,
    ekey,
    gen_clique_bridge,
    gen_clique_union,
    gen_complete,
    gen_cycle,
)
from pathdecomp.regularize import (
    min_degree_subgraph,
    near_regular_subgraph,
    regular_slices,
    regularize_step,
    spanning_near_regular,
)


def test_min_degree_subgraph_examples():
    assert min_degree_subgraph(gen_complete(5), 4).graph.n == 5
    star = Graph(10, [(0, i) for i in range(1, 10)])
    assert min_degree_subgraph(star, 2) is None
    gb = gen_clique_bridge(4, 1)
    sub = min_degree_subgraph(gb, 3)
    assert sub is not None and sub.graph.n == 8


def test_min_degree_none_iff_repeel_empties():
    # re-peel audit: a returned subgraph must survive its own peel
    g = gen_clique_union(2, 5)
    sub = min_degree_subgraph(g, 4)
    assert sub is not None
    again = min_degree_subgraph(sub.graph, 4)
    assert again is not None and again.graph.n == sub.graph.n


def test_regularize_step_parameter_gate():
    # C_n as 2-regular: eps*d < 1 at any workable eps is rejected
    g = gen_cycle(12)
    with pytest.raises(PreconditionError):
        regularize_step(g, 2, gamma=0.1, eps=0.01, seed=0)


def test_regularize_step_on_clique():
    d = 200
    g = gen_complete(d + 1)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        sub, d_new = regularize_step(g, d, gamma=0.1, eps=0.01, seed=0)
    assert sub.graph.n >= (1 - 2 * 0.01) * (d + 1)
    lo = sub.graph.min_degree()
    hi = sub.graph.max_degree()
    assert d_new <= lo
    assert hi <= (1 + 0.1) * (1 - 0.01 / 2) * d_new + 1


def test_spanning_near_regular_gate_and_identity():
    g = gen_complete(40)
    with pytest.raises(PreconditionError):
        spanning_near_regular(g, 39, gamma=0.5, seed=0)
    sub, band = spanning_near_regular(g, 39, gamma=0.005, seed=0)
    assert band.low == band.high == 39  # already regular: zero-width band


def test_near_regular_identity_when_regular():
    g = gen_complete(30)
    sub, band = near_regular_subgraph(g, 29, C=1.1, seed=0)
    assert band.low == band.high == 29
    assert sub.graph.n == 30


def test_near_regular_precondition():
    g = gen_clique_union(1, 10)
    with pytest.raises(PreconditionError):
        near_regular_subgraph(g, 20, C=1.5)  # degrees below d


def test_regular_slices_single_clique():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        g = gen_complete(65)
        slices, unc = regular_slices(g, 64, mu=0.4, eps=0.3, seed=0)
    assert slices, "expected at least one slice"
    assert sum(s.d_i for s in slices) <= (1 + 0.3) * 64
    for s in slices:
        s.audit()
        assert s.d_i % 2 == 0 and s.d_i >= 0.4 * 64
    covered = sum(s.subgraph.graph.m for s in slices)
    assert covered + len(unc) == g.m


def test_regular_slices_trivial_sparse():
    # fewer than eps*n*d edges total: empty list is acceptable
    g = gen_cycle(20)
    slices, unc = regular_slices(g, 64, mu=0.25, eps=0.3, seed=0)
    assert len(unc) == g.m - sum(s.subgraph.graph.m for s in slices)


def test_regular_slices_edge_disjoint_and_conserving():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        k65 = gen_clique_union(1, 65)
        edges = list(k65.edges())
        for i in range(33):
            for j in range(i + 1, 33):
                edges.append((65 + i, 65 + j))
        g = Graph(98, edges)
        slices, unc = regular_slices(g, 64, mu=0.25, eps=0.3, seed=0)
    seen = set()
    for s in slices:
        for u in range(s.subgraph.graph.n):
            for w in s.subgraph.graph.neighbors(u):
                if w > u:
                    e = ekey(s.subgraph.to_parent[u], s.subgraph.to_parent[w])
                    assert e not in seen
                    seen.add(e)
    assert seen | unc == g.edge_set()
    assert len(unc) <= 0.3 * g.n * 64
