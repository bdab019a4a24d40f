import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import graphs, n10_fixture, named_fixtures, random_perm
from mtlzgraph import families as fam
from mtlzgraph.canon import brute_force_key, canonical_form, canonical_graph, canonical_labeling, is_isomorphic
from mtlzgraph.graph import complete_bipartite


def test_relabeled_k23_has_equal_key(rng):
    g = complete_bipartite(2, 3)
    for _ in range(20):
        assert canonical_form(g.relabel(random_perm(5, rng))).key == canonical_form(g).key


def test_q3_and_k33_differ():
    assert canonical_form(fam.hypercube(3)).key != canonical_form(complete_bipartite(3, 3)).key
    assert not is_isomorphic(fam.hypercube(3), complete_bipartite(3, 3))


def test_fixture_set_pairwise_non_isomorphic():
    keys = [canonical_form(g).key for g in n10_fixture()]
    assert len(keys) == 8 == len(set(keys))


def test_relabeling_maps_to_canonical_graph():
    g = fam.catalog_1441_2()
    cf = canonical_form(g)
    assert g.relabel(cf.relabeling).to_graph6().encode() == cf.key
    assert canonical_graph(g).to_graph6().encode() == cf.key


@given(graphs(max_n=7), st.randoms(use_true_random=False))
def test_key_agrees_with_brute_force(g, r):
    h = g.relabel(random_perm(g.n, r))
    assert brute_force_key(g) == brute_force_key(h)
    assert canonical_form(g).key == canonical_form(h).key


@given(graphs(min_n=5, max_n=7), graphs(min_n=5, max_n=7))
def test_isomorphism_decided_like_brute_force(g, h):
    if g.n != h.n:
        return
    assert (canonical_form(g).key == canonical_form(h).key) == (brute_force_key(g) == brute_force_key(h))


def test_brute_force_limit():
    with pytest.raises(ValueError):
        brute_force_key(fam.hypercube(4))


@pytest.mark.parametrize("name", sorted(named_fixtures()))
def test_permutation_invariance_on_fixtures(name):
    g = named_fixtures()[name]
    key = canonical_form(g).key
    rng = random.Random(name)
    for _ in range(1000 if g.n <= 10 else 100):
        assert canonical_form(g.relabel(random_perm(g.n, rng))).key == key


def test_coloured_labeling_respects_colours():
    mat = [[0, 1], [1, 0]]
    c1, _ = canonical_labeling(mat, [0, 1])
    c2, _ = canonical_labeling(mat, [1, 0])
    assert c1 == c2
    # a directed arc is not isomorphic to its reverse once endpoints are coloured
    arc = [[0, 1], [2, 0]]
    rev = [[0, 2], [1, 0]]
    assert canonical_labeling(arc, [0, 1])[0] != canonical_labeling(rev, [0, 1])[0]
