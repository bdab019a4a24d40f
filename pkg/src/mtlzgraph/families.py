"""Deterministic constructions of every named graph used as a fixture.

Vertex numbering is documented per constructor so that tests can refer to
vertices by the labels used in the literature.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import reduce

from .graph import Graph, GraphError, cartesian_product, complete_bipartite

FANO_LINES = ((1, 2, 3), (1, 4, 5), (1, 6, 7), (2, 4, 6), (2, 5, 7), (3, 4, 7), (3, 5, 6))


@dataclass(frozen=True)
class FamilySpec:
    name: str
    params: tuple = ()
    factors: tuple["FamilySpec", ...] = field(default=())


def k2() -> Graph:
    return Graph.from_edges(2, [(0, 1)])


def hypercube(dim: int) -> Graph:
    """Vertices are the integers ``0..2**dim - 1``; edges join Hamming neighbours."""
    if dim < 1:
        raise GraphError("hypercube dimension must be at least 1")
    n = 1 << dim
    return Graph.from_edges(n, ((v, v ^ (1 << i)) for v in range(n) for i in range(dim) if v < v ^ (1 << i)))


def fan(n: int) -> Graph:
    """K_{2,n}: hubs 0 and 1, spokes 2..n+1."""
    if n < 3:
        raise GraphError("fan graphs need n >= 3")
    return complete_bipartite(2, n)


def product(*graphs: Graph) -> Graph:
    if not graphs:
        raise GraphError("product of no graphs")
    return reduce(cartesian_product, graphs)


def g1463() -> Graph:
    """The 14-vertex 4-valent bipartite (0,2)-graph.

    Points of the Fano plane are vertices 0..6 (point p is vertex p-1);
    vertex 7+i is the complement of ``FANO_LINES[i]``. From point 1 the
    BFS layers are 1, 4, 6, 3 and the top layer is blocks 7, 8, 9.
    """
    edges = []
    for i, line in enumerate(FANO_LINES):
        for p in range(1, 8):
            if p not in line:
                edges.append((p - 1, 7 + i))
    return Graph.from_edges(14, edges)


def g14631() -> Graph:
    """``g1463`` plus vertex 14 joined to the top layer seen from point 1."""
    base = g1463()
    top = base.layer_decomposition(0).layers[-1]
    return Graph.from_edges(15, list(base.edges) + [(t, 14) for t in top])


G13631_LABELS = ("v", "v1", "v2", "v3", "12", "12'", "13", "13'", "23", "23'", "u1", "u2", "u3", "u")


def g13631() -> Graph:
    """Layers v | v1 v2 v3 | 12 12' 13 13' 23 23' | u1 u2 u3 | u.

    ``G13631_LABELS`` gives the name of each vertex index.
    """
    idx = {name: i for i, name in enumerate(G13631_LABELS)}
    edges = []
    for i in (1, 2, 3):
        edges += [(idx["v"], idx[f"v{i}"]), (idx["u"], idx[f"u{i}"])]
    for i, j in itertools.combinations((1, 2, 3), 2):
        for mid in (f"{i}{j}", f"{i}{j}'"):
            for end in (f"u{i}", f"u{j}", f"v{i}", f"v{j}"):
                edges.append((idx[end], idx[mid]))
    return Graph.from_edges(14, edges)


CLEBSCH_PAIRS = tuple(itertools.combinations(range(1, 6), 2))


def clebsch16() -> Graph:
    """Vertex 0, vertices 1..5 for i, and 6.. for the pairs in ``CLEBSCH_PAIRS`` order."""
    pair_index = {p: 6 + k for k, p in enumerate(CLEBSCH_PAIRS)}
    edges = [(0, i) for i in range(1, 6)]
    for p, v in pair_index.items():
        edges += [(p[0], v), (p[1], v)]
    for p, q in itertools.combinations(CLEBSCH_PAIRS, 2):
        if not set(p) & set(q):
            edges.append((pair_index[p], pair_index[q]))
    return Graph.from_edges(16, edges)


def clebsch_vertex(label: str) -> int:
    """Map "0", "3" or "24" style labels to vertex indices."""
    if len(label) == 1:
        return int(label)
    return 6 + CLEBSCH_PAIRS.index(tuple(sorted(int(c) for c in label)))


CATALOG_1441_2_EDGES = (
    (1, 2), (1, 3), (1, 4), (1, 5),
    (2, 6), (2, 7), (2, 8),
    (3, 6), (3, 7),
    (4, 6), (4, 8), (4, 9),
    (5, 7), (5, 9),
    (6, 10), (7, 10), (8, 10), (9, 10),
)


def catalog_1441_2() -> Graph:
    """The N=10 candidate 1441-2 with label L stored as vertex L-1."""
    return Graph.from_edges(10, ((a - 1, b - 1) for a, b in CATALOG_1441_2_EDGES))


def build(spec: FamilySpec) -> Graph:
    name = spec.name.lower()
    p = spec.params
    if name == "k2":
        return k2()
    if name == "fan":
        return fan(*p)
    if name in ("complete_bipartite", "completebipartite", "kmn"):
        m, n = p
        if m < 1 or n < 1:
            raise GraphError("complete bipartite sides must be positive")
        return complete_bipartite(m, n)
    if name == "hypercube":
        return hypercube(*p)
    if name == "product":
        return product(*(build(f) for f in spec.factors))
    if name == "g1463":
        return g1463()
    if name == "g14631":
        return g14631()
    if name == "g13631":
        return g13631()
    if name == "clebsch16":
        return clebsch16()
    if name in ("catalog1441_2", "1441-2"):
        return catalog_1441_2()
    raise GraphError(f"unknown family {spec.name!r}")


def parse_family(text: str) -> FamilySpec:
    """Parse ``"hypercube:3"``, ``"fan:4"``, ``"product:K2,fan:3"`` style names."""
    name, _, rest = text.partition(":")
    if name.lower() == "product":
        return FamilySpec("product", factors=tuple(parse_family(t) for t in rest.split(",") if t))
    params = tuple(int(x) for x in rest.replace("x", ",").split(",") if x) if rest else ()
    return FamilySpec(name, params)
