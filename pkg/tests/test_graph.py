import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import graphs, n10_fixture
from mtlzgraph import families as fam
from mtlzgraph.canon import is_isomorphic
from mtlzgraph.graph import (
    DisconnectedGraphError,
    Graph,
    Graph6Error,
    GraphError,
    cartesian_product,
    complete_bipartite,
    cycle_graph,
    emit_graph6,
    parse_graph6,
    path_graph,
)


def test_construction_rejects_loops_and_bad_indices():
    with pytest.raises(GraphError):
        Graph.from_edges(3, [(1, 1)])
    with pytest.raises(GraphError):
        Graph.from_edges(3, [(0, 3)])
    with pytest.raises(GraphError):
        Graph(2, (2, 0))  # asymmetric
    with pytest.raises(GraphError):
        Graph.from_edges(65, [])


def test_parallel_edges_collapse():
    g = Graph.from_edges(2, [(0, 1), (1, 0)])
    assert g.edges == ((0, 1),)


def test_graph6_of_c4():
    g = parse_graph6(emit_graph6(cycle_graph(4)))
    assert g.n == 4 and g.num_edges == 4
    assert g == cycle_graph(4)


def test_graph6_known_string():
    # K4 is the all-ones triangle: 6 bits -> '~'
    assert emit_graph6(Graph.from_edges(4, itertools.combinations(range(4), 2))) == "C~"


def test_graph6_header_prefix_accepted():
    assert parse_graph6(">>graph6<<C~").num_edges == 6


@pytest.mark.parametrize(
    "text, offset",
    [("garbage", 7), ("C~~", 2), ("C", 1), ("B@", 1), ("C\x10", 1), ("", 0), ("~~???????", 1)],
)
def test_graph6_errors_name_offset(text, offset):
    with pytest.raises(Graph6Error) as err:
        parse_graph6(text)
    assert err.value.offset == offset


def test_graph6_rejects_too_many_vertices():
    # n = 65 in the 4-byte header form
    with pytest.raises(Graph6Error):
        parse_graph6("~?A@" + "?" * 400)


def test_graph6_large_n_roundtrip():
    g = cycle_graph(64)
    text = emit_graph6(g)
    assert text.startswith("~")
    assert parse_graph6(text) == g


@given(graphs(max_n=12))
def test_graph6_roundtrip(g):
    text = emit_graph6(g)
    assert parse_graph6(text) == g
    assert emit_graph6(parse_graph6(text)) == text


def test_graph6_roundtrip_on_fixture_set():
    for line in n10_fixture():
        assert parse_graph6(emit_graph6(line)) == line


def test_diameters():
    assert complete_bipartite(2, 3).diameter() == 2
    assert fam.hypercube(3).diameter() == 3
    assert fam.g1463().diameter() == 3


def test_disconnected_distance_error():
    g = Graph.from_edges(4, [(0, 1), (2, 3)])
    with pytest.raises(DisconnectedGraphError):
        g.diameter()
    with pytest.raises(DisconnectedGraphError):
        g.distance(0, 3)
    assert g.bfs_distances(0) == [0, 1, -1, -1]


@given(graphs(max_n=10))
def test_distance_matrix_symmetric(g):
    if not g.is_connected():
        return
    dm = g.distance_matrix
    for a in range(g.n):
        assert dm[a][a] == 0
        for b in range(g.n):
            assert dm[a][b] == dm[b][a]
    assert g.diameter() == max(max(r) for r in dm)


def test_bipartite_examples():
    assert fam.hypercube(3).is_bipartite()
    assert fam.k2().is_bipartite()
    color, cycle = fam.clebsch16().two_coloring()
    assert color is None
    assert len(cycle) == 5
    g = fam.clebsch16()
    assert all(g.has_edge(cycle[i], cycle[(i + 1) % 5]) for i in range(5))


@given(graphs(max_n=10))
def test_two_coloring_witnesses(g):
    color, cycle = g.two_coloring()
    if color is not None:
        assert all(color[a] != color[b] for a, b in g.edges)
    else:
        assert len(cycle) % 2 == 1 and len(set(cycle)) == len(cycle)
        assert all(g.has_edge(cycle[i], cycle[(i + 1) % len(cycle)]) for i in range(len(cycle)))


def test_layer_decompositions():
    assert fam.g1463().layer_decomposition(0).sequence == (1, 4, 6, 3)
    # from a spoke (degree 2): spoke, both hubs, the other two spokes
    assert complete_bipartite(3, 2).layer_decomposition(0).sequence == (1, 2, 2)
    # from a hub's degree-2 view: K_{2,3} with hubs 0,1 -> from hub 0 layers 1,3,1
    assert complete_bipartite(2, 3).layer_decomposition(0).sequence == (1, 3, 1)
    assert fam.k2().layer_decomposition(1).sequence == (1, 1)
    with pytest.raises(DisconnectedGraphError):
        Graph.from_edges(3, [(0, 1)]).layer_decomposition(0)


@given(graphs(max_n=10), st.integers(0, 9))
def test_bipartite_edges_join_consecutive_layers(g, root):
    if root >= g.n or not g.is_connected() or not g.is_bipartite():
        return
    dist = g.bfs_distances(root)
    assert all(abs(dist[a] - dist[b]) == 1 for a, b in g.edges)


def _brute_four_cycles(g):
    count = 0
    for quad in itertools.combinations(range(g.n), 4):
        for a, c, b, d in [(quad[0], x, y, z) for x, y, z in itertools.permutations(quad[1:])]:
            if c < d and all(g.has_edge(*e) for e in ((a, c), (c, b), (b, d), (d, a))):
                count += 1
    return count


def test_four_cycle_counts():
    assert len(complete_bipartite(2, 3).four_cycles()) == 3
    assert len(fam.hypercube(3).four_cycles()) == 6
    assert len(fam.catalog_1441_2().four_cycles()) == 18


@given(graphs(max_n=12))
def test_four_cycles_match_brute_force(g):
    cycles = g.four_cycles()
    assert len(cycles) == len(set(cycles)) == _brute_four_cycles(g)
    for cyc in cycles:
        assert cyc.a == min(cyc) and cyc.c < cyc.d
        assert all(g.has_edge(*e) for e in cyc.edges)


@given(graphs(max_n=10))
def test_four_cycle_diagonals_are_distance_two_pairs(g):
    if g.has_triangle():
        return
    pairs = {(p.a, p.b) for p in g.distance2_pairs()}
    for cyc in g.four_cycles():
        d1, d2 = cyc.diagonals
        assert d1 in pairs and d2 in pairs


def test_distance_two_pairs():
    g = fam.catalog_1441_2()
    pairs = g.distance2_pairs()
    assert len(pairs) == 20
    assert sorted(len(p.common) for p in pairs) == [2] * 12 + [3] * 8
    assert fam.k2().distance2_pairs() == []
    # K_{2,3}: the hub pair shares all three spokes, each spoke pair shares both hubs
    ks = complete_bipartite(2, 3).distance2_pairs()
    assert [(p.a, p.b, len(p.common)) for p in ks] == [(0, 1, 3), (2, 3, 2), (2, 4, 2), (3, 4, 2)]


@given(graphs(max_n=10))
def test_distance_two_pairs_exact(g):
    found = {(p.a, p.b): p.common for p in g.distance2_pairs()}
    for a in range(g.n):
        for b in range(a + 1, g.n):
            common = tuple(c for c in range(g.n) if g.has_edge(a, c) and g.has_edge(b, c))
            if not g.has_edge(a, b) and common:
                assert found[(a, b)] == common
            else:
                assert (a, b) not in found


def test_cartesian_products():
    assert is_isomorphic(cartesian_product(fam.k2(), fam.k2()), cycle_graph(4))
    g = cartesian_product(fam.k2(), complete_bipartite(2, 3))
    assert (g.n, g.num_edges) == (10, 17)
    assert is_isomorphic(cartesian_product(fam.k2(), cycle_graph(4)), fam.hypercube(3))
    with pytest.raises(GraphError):
        cartesian_product(cycle_graph(8), cycle_graph(9))


def test_product_adjacency_rule():
    g1, g2 = path_graph(3), cycle_graph(4)
    p = cartesian_product(g1, g2)
    for u1, u2, v1, v2 in itertools.product(range(3), range(4), range(3), range(4)):
        expect = (u1 == v1 and g2.has_edge(u2, v2)) or (u2 == v2 and g1.has_edge(u1, v1))
        assert p.has_edge(u1 * 4 + u2, v1 * 4 + v2) == expect


def test_relabel_and_induced():
    g = path_graph(4)
    h = g.relabel([3, 2, 1, 0])
    assert h == g
    with pytest.raises(GraphError):
        g.relabel([0, 0, 1, 2])
    assert g.induced([1, 2, 3]).edges == ((0, 1), (1, 2))
