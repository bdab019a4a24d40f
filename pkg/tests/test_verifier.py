import math

import numpy as np
import pytest

from mtlzgraph.graph import Graph, complete_bipartite, complete_graph, path_graph
from mtlzgraph.orientation import CycleClass, Orientation
from mtlzgraph.verifier import (
    CycleTransform,
    MTLZData,
    VerifierError,
    apply_cycle_transform,
    c4_example,
    check_cycle_property,
    check_multipath_property,
    fundamental_cycles,
    independence_violations,
    wedge,
)


def test_c4_example_passes_both_checks():
    data = c4_example()
    cyc = check_cycle_property(data)
    mp = check_multipath_property(data)
    assert cyc.passed and cyc.max_residual <= 1e-12
    assert mp.passed and mp.max_residual <= 1e-12
    assert independence_violations(data) == []


def test_c4_with_flipped_form_fails_multipath():
    data = c4_example()
    data.forms[(1, 2)] = np.array([0.0, -1.0])
    mp = check_multipath_property(data)
    assert not mp.passed
    assert mp.max_residual == pytest.approx(2.0)


def test_c4_all_positive_signs_fail_cycle_property():
    rep = check_cycle_property(c4_example((1, 1, 1, 1)))
    assert not rep.passed
    assert rep.max_residual == pytest.approx(2.0)


@pytest.mark.parametrize("edge", [(0, 2), (1, 3), (0, 3), (1, 2)])
def test_single_sign_flip_is_rejected(edge):
    data = c4_example()
    signs = dict(data.orientation.signs)
    signs[edge] = -signs[edge]
    data.orientation = Orientation(signs)
    assert not check_cycle_property(data).passed


def test_triangle_cannot_satisfy_cycle_property():
    g = complete_graph(3)
    rng = np.random.default_rng(0)
    for _ in range(50):
        forms = {e: rng.normal(size=2) for e in g.edges}
        signs = {e: int(rng.choice([-1, 1])) for e in g.edges}
        data = MTLZData(g, Orientation(signs), forms, {e: 1.0 for e in g.edges})
        assert not check_cycle_property(data).passed


def test_single_common_neighbour_pair_fails_multipath():
    g = path_graph(3)
    data = MTLZData(
        g,
        Orientation({(0, 1): 1, (1, 2): -1}),
        {(0, 1): [1.0, 0.0], (1, 2): [0.0, 1.0]},
        {(0, 1): 1.0, (1, 2): 1.0},
    )
    rep = check_multipath_property(data)
    assert not rep.passed
    assert independence_violations(data) == []


def test_k23_construction_passes_multipath():
    g = complete_bipartite(2, 3)
    m = np.diag([1.0, -1.0])
    us = {2: np.array([1.0, 1.0]), 3: np.array([1.0, -2.0]), 4: np.array([2.0, 0.5])}
    forms = {}
    for c, u in us.items():
        forms[(0, c)] = u
        forms[(1, c)] = m @ u
    signs = {e: 1 for e in g.edges}
    data = MTLZData(g, Orientation(signs), forms, {e: 1.0 for e in g.edges})
    rep = check_multipath_property(data)
    assert rep.passed, rep.items
    assert len(rep.items) == 4


def test_wedge_identities():
    rng = np.random.default_rng(1)
    for _ in range(1000):
        u, v, w = rng.normal(size=(3, 3))
        a, b = rng.normal(size=2)
        assert np.allclose(wedge(u, v), -wedge(v, u))
        assert np.allclose(wedge(u, u), 0)
        assert np.allclose(wedge(a * u + b * w, v), a * wedge(u, v) + b * wedge(w, v))


@pytest.mark.parametrize("kind", [CycleClass.NON_BIPARTITE, CycleClass.BIPARTITE])
def test_transform_preserves_outer_product_balance(kind):
    rng = np.random.default_rng(2)
    for _ in range(100):
        a13, a14 = rng.normal(size=(2, 3))
        t = CycleTransform(int(rng.choice([-1, 1])), int(rng.choice([-1, 1])), float(rng.uniform(-2, 2)))
        a24, a23 = apply_cycle_transform(a13, a14, t, kind)
        o = lambda f: np.outer(f, f)  # noqa: E731
        if kind is CycleClass.NON_BIPARTITE:
            total = o(a13) - o(a14) - o(a24) + o(a23)
        else:
            total = o(a13) - o(a14) + o(a24) - o(a23)
        assert np.max(np.abs(total)) <= 1e-9 * (1 + np.max(np.abs(o(a13)) + np.abs(o(a14))))


def test_transform_multipath_tracks_the_magnitude_equation():
    # On C4 the pair (1, 2) residual is cosh(theta) |r w13 + w14| |a13 ^ a14|
    g = Graph.from_edges(4, [(0, 2), (0, 3), (1, 3), (1, 2)])
    rng = np.random.default_rng(3)
    for _ in range(200):
        a13, a14 = rng.normal(size=(2, 2))
        t = CycleTransform(int(rng.choice([-1, 1])), int(rng.choice([-1, 1])), float(rng.uniform(-1, 1)))
        a24, a23 = apply_cycle_transform(a13, a14, t, CycleClass.NON_BIPARTITE)
        gam = {e: float(rng.uniform(0.2, 3)) for e in g.edges}
        forms = {(0, 2): a13, (0, 3): a14, (1, 3): a24, (1, 2): a23}
        data = MTLZData(g, Orientation({e: 1 for e in g.edges}), forms, gam)
        rep = dict(check_multipath_property(data, tol=0).items)
        w1 = math.sqrt(gam[(0, 2)] * gam[(1, 2)])
        w2 = math.sqrt(gam[(0, 3)] * gam[(1, 3)])
        det = abs(a13[0] * a14[1] - a13[1] * a14[0])
        expect = math.cosh(t.theta) * abs(t.r * w1 + w2) * det
        assert rep[(0, 1)] == pytest.approx(expect, rel=1e-9, abs=1e-12)


def test_transform_examples_and_errors():
    a24, a23 = apply_cycle_transform([1, 0], [0, 1], CycleTransform(1, -1, 0.0), CycleClass.NON_BIPARTITE)
    assert np.allclose(a24, [1, 0]) and np.allclose(a23, [0, 1])
    a24, a23 = apply_cycle_transform([1, 0], [0, 1], CycleTransform(1, 1, 0.0), CycleClass.BIPARTITE)
    assert np.allclose(a24, [0, 1]) and np.allclose(a23, [1, 0])
    with pytest.raises(VerifierError):
        apply_cycle_transform([1, 0], [0, 1], CycleTransform(), CycleClass.INVALID)
    with pytest.raises(VerifierError):
        CycleTransform(p=2)


def test_fundamental_cycles_count():
    g = complete_bipartite(3, 3)
    cycles = fundamental_cycles(g)
    assert len(cycles) == len(g.edges) - g.n + 1
    for walk in cycles:
        for i, a in enumerate(walk):
            assert g.has_edge(a, walk[(i + 1) % len(walk)])


def test_from_json_round_trip_and_validation():
    data = c4_example()
    doc = {
        "graph6": data.graph.to_graph6(),
        "signs": [[a, b, s] for (a, b), s in data.orientation.signs.items()],
        "forms": [{"edge": list(e), "form": list(v)} for e, v in data.forms.items()],
        "gamma": [[a, b, v] for (a, b), v in data.gamma.items()],
    }
    back = MTLZData.from_json(doc)
    assert check_multipath_property(back).passed
    assert check_cycle_property(back).passed
    bad = dict(doc, signs=[[0, 2, 3]] + doc["signs"][1:])
    with pytest.raises(VerifierError):
        MTLZData.from_json(bad)
    nonedge = dict(doc, forms=doc["forms"] + [{"edge": [0, 1], "form": [1, 0]}])
    with pytest.raises(VerifierError):
        MTLZData.from_json(nonedge)


def test_missing_data_raises():
    data = c4_example()
    del data.gamma[(0, 2)]
    with pytest.raises(VerifierError):
        check_multipath_property(data)
    data = c4_example()
    with pytest.raises(VerifierError):
        MTLZData(data.graph, data.orientation, {(0, 2): [1, 0], (0, 3): [1, 0, 0]})
