import pytest
from hypothesis import given, strategies as st

from oracles import all_paths_into
from rqc.graph import (
    GraphError,
    build_graph,
    enumerate_paths,
    format_graph,
    gen_complete,
    gen_complete_bipartite,
    gen_cycle,
    gen_wheel,
    in_neighbors_l,
    is_valid_path,
    iter_subsets,
    longest_cycle_free_path_length,
    out_neighbors_l,
    parse_graph,
    paths_into,
    undirected,
)
from strategies import small_graphs


class TestConstruction:
    def test_duplicates_collapse(self):
        g = build_graph(3, [(0, 1), (0, 1), (1, 2)])
        assert len(g.edges) == 2

    @pytest.mark.parametrize("edges", [[(0, 3)], [(-1, 0)], [(1, 1)]])
    def test_bad_edges(self, edges):
        with pytest.raises(GraphError):
            build_graph(3, edges)

    def test_undirected_is_symmetric(self):
        g = undirected(4, [(0, 1), (2, 3)])
        assert g.is_symmetric
        assert g.has_edge(1, 0) and g.has_edge(0, 1)
        assert not build_graph(2, [(0, 1)]).is_symmetric

    def test_induced_relabels(self):
        g = gen_cycle(5)
        sub, labels = g.induced([0, 1, 2, 4])
        assert labels == (0, 1, 2, 4)
        # 4-0-1-2 is a path once node 3 is gone
        assert sub.n == 4 and len(sub.edges) == 6
        assert sub.has_edge(3, 0)


class TestGenerators:
    @pytest.mark.parametrize("n", range(3, 10))
    def test_cycle_degrees(self, n):
        g = gen_cycle(n)
        assert all(g.in_degree(i) == 2 for i in g.nodes)
        assert longest_cycle_free_path_length(g) == n - 1

    @pytest.mark.parametrize("n", range(4, 9))
    def test_wheel(self, n):
        g = gen_wheel(n)
        assert g.in_degree(0) == n - 1
        assert all(g.in_degree(i) == 3 for i in range(1, n))
        assert longest_cycle_free_path_length(g) == n - 1

    def test_wheel_rim_order(self):
        g = gen_wheel(6, rim_order=[1, 3, 2, 4, 5])
        assert g.has_edge(2, 4) and g.has_edge(1, 3) and not g.has_edge(1, 2)
        with pytest.raises(GraphError):
            gen_wheel(6, rim_order=[1, 2, 3])

    def test_complete_bipartite_parts(self):
        g = gen_complete_bipartite(3, 3, parts=([0, 2, 4], [1, 3, 5]))
        assert g.has_edge(0, 1) and not g.has_edge(0, 2)
        assert g.min_in_degree() == 3
        with pytest.raises(GraphError):
            gen_complete_bipartite(2, 2, parts=([0, 1], [1, 2]))

    def test_complete(self):
        assert len(gen_complete(5).edges) == 20

    @pytest.mark.parametrize("bad", [lambda: gen_cycle(2), lambda: gen_wheel(3), lambda: gen_complete_bipartite(0, 3)])
    def test_too_small(self, bad):
        with pytest.raises(GraphError):
            bad()


class TestNeighborhoods:
    def test_cycle_two_hops(self):
        g = gen_cycle(8)
        assert in_neighbors_l(g, 0, 2) == {6, 7, 0, 1, 2}
        assert out_neighbors_l(g, 0, 1) == {7, 0, 1}

    def test_needs_positive_hops(self):
        with pytest.raises(ValueError):
            in_neighbors_l(gen_cycle(4), 0, 0)


class TestPaths:
    def test_cycle_counts(self):
        # On a cycle each of the two directions gives one path per length.
        g = gen_cycle(8)
        assert len(paths_into(g, 1, 4)) == 8
        assert len(paths_into(g, 1, 7)) == 14

    def test_forbidden_only_blocks_interiors(self):
        g = gen_cycle(6)
        ps = paths_into(g, 0, 3, forbidden_intermediates={1})
        assert (1, 0) in ps
        assert not any(1 in p[1:-1] for p in ps)

    def test_enumerate_paths(self):
        g = gen_cycle(6)
        assert enumerate_paths(g, 3, 0, 3) == [(3, 2, 1, 0), (3, 4, 5, 0)]
        assert enumerate_paths(g, 3, 0, 2) == []
        with pytest.raises(ValueError):
            enumerate_paths(g, 0, 0, 2)

    @given(small_graphs(), st.integers(1, 4))
    def test_matches_forward_search(self, g, l):
        for i in g.nodes:
            ps = paths_into(g, i, l)
            assert sorted(ps) == sorted(all_paths_into(g, i, l))
            assert all(is_valid_path(g, p) and len(p) - 1 <= l for p in ps)

    @given(small_graphs(), st.integers(1, 3))
    def test_allowed_restricts_every_node(self, g, l):
        keep = set(range(0, g.n, 2))
        for p in paths_into(g, 0, l, allowed=keep):
            assert set(p) <= keep


class TestTextFormat:
    def test_roundtrip(self):
        for g in (gen_cycle(5), gen_wheel(6), build_graph(3, [(0, 1), (1, 2)])):
            assert parse_graph(format_graph(g, "hello")) == g

    def test_comments_and_directed(self):
        g = parse_graph("# demo\nn 3\n0 1\nu 1 2\n")
        assert g.edges == {(0, 1), (1, 2), (2, 1)}

    @pytest.mark.parametrize(
        "text,line",
        [("n 3\n0 5\n", 2), ("x 3\n", 1), ("n 3\n0 1 2 3\n", 2), ("n 2\n0 q\n", 2), ("n 2\n1 1\n", 2)],
    )
    def test_errors_carry_line_numbers(self, text, line):
        with pytest.raises(GraphError, match=f"line {line}"):
            parse_graph(text)

    def test_missing_header(self):
        with pytest.raises(GraphError):
            parse_graph("# nothing\n")


def test_iter_subsets():
    subs = list(iter_subsets(range(4), 2))
    assert len(subs) == 1 + 4 + 6
    assert subs[0] == frozenset()
