import itertools

import pytest

from mtlzgraph import families as fam
from mtlzgraph.canon import is_isomorphic
from mtlzgraph.graph import GraphError, complete_bipartite
from mtlzgraph.rules import check_no_k3, is_zero_two_graph


def test_hypercube_is_product_of_k2():
    for dim in range(1, 5):
        assert is_isomorphic(fam.hypercube(dim), fam.product(*[fam.k2()] * dim))


def test_parameter_checks():
    with pytest.raises(GraphError):
        fam.fan(2)
    with pytest.raises(GraphError):
        fam.hypercube(0)
    with pytest.raises(GraphError):
        fam.build(fam.FamilySpec("nonsense"))


def test_fan_is_k2n():
    assert fam.fan(4) == complete_bipartite(2, 4)


def test_g1463():
    g = fam.g1463()
    assert g.n == 14 and set(g.degrees()) == {4}
    assert g.is_bipartite() and g.diameter() == 3
    assert g.layer_decomposition(0).sequence == (1, 4, 6, 3)
    assert is_zero_two_graph(g)


def test_g14631_contains_g1463():
    g = fam.g14631()
    assert g.n == 15
    assert g.induced(range(14)) == fam.g1463()
    assert g.layer_decomposition(0).sequence == (1, 4, 6, 3, 1)


def test_g13631_degrees():
    g = fam.g13631()
    idx = {name: i for i, name in enumerate(fam.G13631_LABELS)}
    assert g.n == 14
    assert g.degree(idx["u"]) == g.degree(idx["v"]) == 3
    for i in (1, 2, 3):
        assert g.degree(idx[f"u{i}"]) == g.degree(idx[f"v{i}"]) == 5
    for mid in ("12", "12'", "13", "13'", "23", "23'"):
        assert g.degree(idx[mid]) == 4
    assert g.layer_decomposition(idx["v"]).sequence == (1, 3, 6, 3, 1)


def test_clebsch16():
    g = fam.clebsch16()
    assert g.n == 16 and set(g.degrees()) == {5}
    assert check_no_k3(g).passed
    walk = [fam.clebsch_vertex(x) for x in ("0", "1", "13", "24", "2")]
    assert all(g.has_edge(walk[i], walk[(i + 1) % 5]) for i in range(5))
    assert not g.is_bipartite()


def test_catalog_1441_2():
    g = fam.catalog_1441_2()
    assert g.num_edges == 18
    assert sorted(g.degrees(), reverse=True) == [4] * 6 + [3] * 4


def _lab(v):
    return 10 if v == 9 else v + 1


def test_catalog_1441_2_pair_census():
    g = fam.catalog_1441_2()
    two = {(1, 8), (1, 9), (3, 10), (5, 10), (2, 5), (3, 4), (3, 5), (4, 5), (6, 9), (7, 8), (7, 9), (8, 9)}
    three = {(1, 6), (1, 7), (2, 10), (4, 10), (2, 3), (2, 4), (6, 7), (6, 8)}
    census = {(_lab(p.a), _lab(p.b)): len(p.common) for p in g.distance2_pairs()}
    assert {k for k, v in census.items() if v == 2} == two
    assert {k for k, v in census.items() if v == 3} == three


@pytest.mark.parametrize(
    "text, n, m",
    [("K2", 2, 1), ("fan:3", 5, 6), ("hypercube:3", 8, 12), ("product:K2,fan:3", 10, 17),
     ("g1463", 14, 28), ("clebsch16", 16, 40), ("1441-2", 10, 18), ("complete_bipartite:3x3", 6, 9)],
)
def test_parse_family(text, n, m):
    g = fam.build(fam.parse_family(text))
    assert (g.n, g.num_edges) == (n, m)
