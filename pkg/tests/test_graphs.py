"""Graph primitives against brute-force oracles.

The oracles here are deliberately naive: permutation scans over adjacency
dictionaries, no pruning, no shared code with the library. Slow but
unarguable.
"""

import math
from itertools import combinations, permutations

import pytest
from hypothesis import given
import hypothesis.strategies as st

from subalign.errors import CapExceeded
from subalign.graphs import (
    Graph,
    VertexBijection,
    aut_count,
    complete_graph,
    cycle_graph,
    distinct_relabeling_count,
    empty_graph,
    find_isomorphism,
    format_edge_list,
    is_isomorphic,
    is_rigid,
    named_graph,
    pair_count,
    pair_index,
    parse_edge_list,
    path_graph,
)


# -- oracles -----------------------------------------------------------------


def oracle_is_isomorphic(g1: Graph, g2: Graph) -> bool:
    """Try every vertex bijection, comparing edge sets directly."""
    if g1.order != g2.order:
        return False
    target = {frozenset(e) for e in g2.edges()}
    for perm in permutations(range(g1.order)):
        if {frozenset((perm[u], perm[v])) for u, v in g1.edges()} == target:
            return True
    return False


def oracle_aut_count(g: Graph) -> int:
    edges = {frozenset(e) for e in g.edges()}
    count = 0
    for perm in permutations(range(g.order)):
        if {frozenset((perm[u], perm[v])) for u, v in g.edges()} == edges:
            count += 1
    return count


def graphs(max_order=7, min_order=1):
    """Hypothesis strategy: a random graph as (order, edge subset)."""

    def build(order, bits):
        pairs = list(combinations(range(order), 2))
        edges = [e for e, keep in zip(pairs, bits) if keep]
        return Graph.from_edges(order, edges)

    return st.integers(min_order, max_order).flatmap(
        lambda o: st.tuples(
            st.just(o), st.lists(st.booleans(), min_size=pair_count(o), max_size=pair_count(o))
        )
    ).map(lambda t: build(*t))


# -- construction and queries -------------------------------------------------


def test_pair_index_matches_lex_enumeration():
    for n in range(2, 9):
        expected = {pair: k for k, pair in enumerate(combinations(range(n), 2))}
        for (u, v), k in expected.items():
            assert pair_index(u, v, n) == k
            assert pair_index(v, u, n) == k
        assert len(expected) == pair_count(n)


def test_from_edges_rejects_bad_input():
    with pytest.raises(ValueError):
        Graph.from_edges(3, [(0, 0)])
    with pytest.raises(ValueError):
        Graph.from_edges(3, [(0, 1), (1, 0)])
    with pytest.raises(ValueError):
        Graph.from_edges(3, [(0, 3)])
    with pytest.raises(ValueError):
        Graph.from_edges(-1, [])


def test_basic_queries():
    g = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    assert g.edge_count == 3
    assert g.has_edge(1, 0) and not g.has_edge(0, 2)
    assert g.degrees() == (1, 2, 2, 1)
    assert g.degree_multiset() == (1, 1, 2, 2)
    assert sorted(g.neighbors(1)) == [0, 2]
    assert g.edges() == [(0, 1), (1, 2), (2, 3)]
    g.validate()


@given(graphs(max_order=6))
def test_adjacency_code_round_trip(g):
    assert Graph.from_code(g.order, g.adjacency_code()) == g


@given(graphs(max_order=6))
def test_complement_involution(g):
    c = g.complement()
    assert c.complement() == g
    assert c.edge_count == pair_count(g.order) - g.edge_count
    c.validate()


def test_induced_subgraph_explicit():
    g = Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)])  # C5
    sub = g.induced([1, 2, 4])
    # kept edges: (1,2) only; vertices renamed 1->0, 2->1, 4->2
    assert sub.order == 3
    assert sub.edges() == [(0, 1)]
    with pytest.raises(ValueError):
        g.induced([])
    with pytest.raises(ValueError):
        g.induced([0, 0, 1])
    with pytest.raises(ValueError):
        g.induced([3, 5])


@given(graphs(max_order=7, min_order=2), st.data())
def test_induced_matches_direct_edge_checks(g, data):
    m = data.draw(st.integers(1, g.order))
    subset = tuple(sorted(data.draw(st.permutations(range(g.order)))[:m]))
    sub = g.induced(subset)
    for i, j in combinations(range(m), 2):
        assert sub.has_edge(i, j) == g.has_edge(subset[i], subset[j])


@given(graphs(max_order=7, min_order=1), st.data())
def test_relabel_preserves_structure(g, data):
    image = tuple(data.draw(st.permutations(range(g.order))))
    b = VertexBijection(tuple(range(g.order)), image)
    r = g.relabel(b)
    r.validate()
    assert r.edge_count == g.edge_count
    assert sorted(r.degree_multiset()) == sorted(g.degree_multiset())
    for u, v in g.edges():
        assert r.has_edge(image[u], image[v])


def test_relabel_requires_full_domain():
    g = path_graph(3)
    with pytest.raises(ValueError):
        g.relabel(VertexBijection((0, 1), (1, 0)))


def test_vertex_bijection_validation_and_maps():
    b = VertexBijection((2, 5, 7), (1, 0, 2))
    assert b.apply(5) == 0 and b.invert(2) == 7
    assert b.as_dict() == {2: 1, 5: 0, 7: 2}
    assert VertexBijection.from_dict({7: 2, 2: 1, 5: 0}) == b
    assert VertexBijection.identity([5, 2]).image == (0, 1)
    with pytest.raises(ValueError):
        VertexBijection((2, 2), (0, 1))
    with pytest.raises(ValueError):
        VertexBijection((1, 2), (0, 2))
    with pytest.raises(KeyError):
        b.apply(3)


def test_named_graphs():
    assert named_graph("k4") == complete_graph(4)
    assert named_graph("P3") == path_graph(3)
    assert named_graph("c5") == cycle_graph(5)
    assert named_graph("e2") == empty_graph(2)
    assert cycle_graph(3) == complete_graph(3)
    for bad in ("q3", "k", "3", "p-1"):
        with pytest.raises(ValueError):
            named_graph(bad)


# -- edge-list text format ----------------------------------------------------


@given(graphs(max_order=7))
def test_edge_list_round_trip(g):
    assert parse_edge_list(format_edge_list(g)) == g


def test_edge_list_parser_is_strict():
    assert parse_edge_list("# comment\n3 1\n\n1 2\n") == Graph.from_edges(3, [(0, 1)])
    for text in (
        "",
        "3\n",
        "3 2\n1 2\n",  # count mismatch
        "3 1\n1 2 3\n",
        "3 1\n0 2\n",  # 1-based ids
        "3 1\n1 4\n",
        "3 2\n1 2\n1 2\n",  # duplicate
        "3 1\n2 2\n",  # loop
    ):
        with pytest.raises(ValueError):
            parse_edge_list(text)


# -- isomorphism ---------------------------------------------------------------


def test_isomorphism_fixed_cases():
    assert not is_isomorphic(complete_graph(3), path_graph(3))
    assert is_isomorphic(cycle_graph(4), Graph.from_edges(4, [(0, 2), (2, 1), (1, 3), (3, 0)]))
    # same degree multiset, different structure: C6 vs two triangles
    two_triangles = Graph.from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    assert not is_isomorphic(cycle_graph(6), two_triangles)


@given(graphs(max_order=5), graphs(max_order=5))
def test_is_isomorphic_matches_oracle(g1, g2):
    assert is_isomorphic(g1, g2) == oracle_is_isomorphic(g1, g2)


@given(graphs(max_order=6, min_order=1), st.data())
def test_relabeled_graph_is_isomorphic(g, data):
    image = tuple(data.draw(st.permutations(range(g.order))))
    r = g.relabel(VertexBijection(tuple(range(g.order)), image))
    assert is_isomorphic(g, r)
    w = find_isomorphism(g, r)
    assert w is not None
    assert g.relabel(w) == r


def test_find_isomorphism_returns_lex_min_witness():
    p = path_graph(3)
    w = find_isomorphism(p, p)
    # both (0,1,2) and (2,1,0) are witnesses; lex-min wins
    assert w.image == (0, 1, 2)
    c = cycle_graph(4)
    assert find_isomorphism(c, c).image == (0, 1, 2, 3)
    assert find_isomorphism(p, complete_graph(3)) is None


@given(graphs(max_order=5))
def test_find_isomorphism_image_is_minimal(g):
    w = find_isomorphism(g, g)
    assert w is not None
    edges = {frozenset(e) for e in g.edges()}
    best = min(
        perm
        for perm in permutations(range(g.order))
        if {frozenset((perm[u], perm[v])) for u, v in g.edges()} == edges
    )
    assert w.image == tuple(best)


# -- automorphism counting ------------------------------------------------------


PETERSEN = Graph.from_edges(
    10,
    [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0),
     (5, 7), (7, 9), (9, 6), (6, 8), (8, 5),
     (0, 5), (1, 6), (2, 7), (3, 8), (4, 9)],
)


def test_aut_count_known_groups():
    assert aut_count(complete_graph(4)) == 24
    assert aut_count(empty_graph(4)) == 24
    assert aut_count(cycle_graph(5)) == 10  # dihedral
    assert aut_count(path_graph(4)) == 2
    assert aut_count(path_graph(1)) == 1
    assert aut_count(PETERSEN) == 120
    assert aut_count(PETERSEN, method="refined") == 120
    assert aut_count(empty_graph(15)) == math.factorial(15)
    assert aut_count(empty_graph(0)) == 1


@given(graphs(max_order=6))
def test_aut_count_matches_oracle(g):
    assert aut_count(g) == oracle_aut_count(g)


@given(graphs(max_order=8, min_order=1))
def test_brute_and_refined_agree(g):
    assert aut_count(g, method="brute") == aut_count(g, method="refined")


def test_aut_count_cap_and_method_validation():
    with pytest.raises(CapExceeded):
        aut_count(complete_graph(21))
    with pytest.raises(CapExceeded):
        aut_count(empty_graph(5), cap=4)
    with pytest.raises(ValueError):
        aut_count(path_graph(3), method="magic")


@given(graphs(max_order=7, min_order=1))
def test_relabeling_count_times_aut_is_factorial(g):
    assert distinct_relabeling_count(g) * aut_count(g) == math.factorial(g.order)


@given(graphs(max_order=6, min_order=1))
def test_distinct_relabelings_by_direct_dedup(g):
    seen = set()
    for image in permutations(range(g.order)):
        seen.add(g.relabel(VertexBijection(tuple(range(g.order)), image)).adjacency_code())
    assert len(seen) == distinct_relabeling_count(g)


@given(graphs(max_order=7, min_order=1))
def test_is_rigid_iff_trivial_group(g):
    assert is_rigid(g) == (aut_count(g) == 1)


def test_smallest_rigid_graphs_have_order_six():
    # no graph on 2..5 vertices is rigid; a known rigid one on 6 exists
    for order in (2, 3, 4, 5):
        for code in range(1 << pair_count(order)):
            assert not is_rigid(Graph.from_code(order, code))
    rigid6 = Graph.from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (1, 3), (2, 4), (3, 5)])
    assert aut_count(rigid6) == 1 and is_rigid(rigid6)
