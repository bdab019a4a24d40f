"""Direct checks of explicit MTLZ data: signs, linear forms and magnitudes.

Forms are real vectors of a caller-chosen dimension ``m``. The cycle
property sums ``s * A (x) A`` around every fundamental cycle of a BFS tree;
the multipath property sums ``sqrt(gamma gamma') A ^ A'`` over the paths of
every distance-2 pair, with ``u ^ v = u (x) v - v (x) u``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .graph import Graph, GraphError, parse_graph6
from .orientation import CycleClass, Orientation


class VerifierError(ValueError):
    pass


def wedge(u, v) -> np.ndarray:
    u = np.asarray(u, float)
    v = np.asarray(v, float)
    return np.outer(u, v) - np.outer(v, u)


@dataclass(frozen=True)
class CycleTransform:
    p: int = 1
    r: int = 1
    theta: float = 0.0

    def __post_init__(self):
        if self.p not in (1, -1) or self.r not in (1, -1):
            raise VerifierError("p and r must be +1 or -1")


def apply_cycle_transform(base13, base14, t: CycleTransform, kind: CycleClass) -> tuple[np.ndarray, np.ndarray]:
    """Forms on edges 2-4 and 2-3 of the cycle 1-3-2-4 from those on 1-3 and 1-4."""
    a13 = np.asarray(base13, float)
    a14 = np.asarray(base14, float)
    ch, sh = math.cosh(t.theta), math.sinh(t.theta)
    p, r = t.p, t.r
    if kind is CycleClass.NON_BIPARTITE:
        return p * (ch * a13 - r * sh * a14), p * (sh * a13 - r * ch * a14)
    if kind is CycleClass.BIPARTITE:
        return p * (r * sh * a13 + ch * a14), p * (r * ch * a13 + sh * a14)
    raise VerifierError("no transform exists for an invalidly oriented cycle")


@dataclass
class MTLZData:
    graph: Graph
    orientation: Orientation
    forms: dict[tuple[int, int], np.ndarray]
    gamma: dict[tuple[int, int], float] = field(default_factory=dict)

    def __post_init__(self):
        edges = set(self.graph.edges)
        self.forms = {_key(e): np.asarray(v, float) for e, v in self.forms.items()}
        self.gamma = {_key(e): float(v) for e, v in self.gamma.items()}
        extra = (set(self.forms) | set(self.gamma) | set(self.orientation.signs)) - edges
        if extra:
            raise VerifierError(f"data refers to non-edges {sorted(extra)}")
        dims = {v.shape for v in self.forms.values()}
        if len(dims) > 1:
            raise VerifierError("forms have mixed dimensions")

    @property
    def dimension(self) -> int:
        return next(iter(self.forms.values())).shape[0] if self.forms else 0

    def form(self, a: int, b: int) -> np.ndarray:
        try:
            return self.forms[_key((a, b))]
        except KeyError:
            raise VerifierError(f"missing form on edge {_key((a, b))}") from None

    def magnitude(self, a: int, b: int) -> float:
        try:
            return self.gamma[_key((a, b))]
        except KeyError:
            raise VerifierError(f"missing gamma on edge {_key((a, b))}") from None

    def sign(self, a: int, b: int) -> int:
        try:
            return self.orientation.sign(a, b)
        except KeyError:
            raise VerifierError(f"missing sign on edge {_key((a, b))}") from None

    @classmethod
    def from_json(cls, doc: Mapping) -> MTLZData:
        g = parse_graph6(doc["graph6"])
        signs = {_key(tuple(e)): int(s) for *e, s in doc["signs"]}
        for (a, b), s in list(signs.items()):
            if s not in (1, -1):
                raise VerifierError(f"sign on {(a, b)} must be +1 or -1")
        forms = {_key(tuple(item["edge"])): item["form"] for item in doc["forms"]}
        gamma = {_key(tuple(e)): v for *e, v in doc.get("gamma", [])}
        return cls(g, Orientation(signs), forms, gamma)


def _key(e) -> tuple[int, int]:
    a, b = e
    return (a, b) if a < b else (b, a)


@dataclass
class ResidualReport:
    passed: bool
    max_residual: float
    items: list[tuple[tuple[int, ...], float]]

    def to_dict(self) -> dict:
        return {
            "pass": self.passed,
            "max_residual": self.max_residual,
            "items": [{"where": list(w), "residual": v} for w, v in self.items],
        }


def fundamental_cycles(g: Graph, root: int = 0) -> list[list[int]]:
    """Closed vertex walks, one per non-tree edge of a BFS tree."""
    if g.n == 0:
        return []
    parent = [-1] * g.n
    depth = [-1] * g.n
    depth[root] = 0
    order = [root]
    for v in order:
        for w in g.neighbors(v):
            if depth[w] < 0:
                depth[w] = depth[v] + 1
                parent[w] = v
                order.append(w)
    if any(d < 0 for d in depth):
        raise GraphError("cycle basis needs a connected graph")
    cycles = []
    for a, b in g.edges:
        if parent[a] == b or parent[b] == a:
            continue
        left, right = [a], [b]
        x, y = a, b
        while x != y:
            if depth[x] >= depth[y]:
                x = parent[x]
                left.append(x)
            else:
                y = parent[y]
                right.append(y)
        # left ends at the common ancestor; right also does, drop its copy
        cycles.append(left + right[-2::-1])
    return cycles


def check_cycle_property(data: MTLZData, tol: float = 1e-12) -> ResidualReport:
    items = []
    for walk in fundamental_cycles(data.graph):
        total = np.zeros((data.dimension, data.dimension))
        for i, a in enumerate(walk):
            b = walk[(i + 1) % len(walk)]
            f = data.form(a, b)
            total += data.sign(a, b) * np.outer(f, f)
        items.append((tuple(walk), float(np.max(np.abs(total))) if total.size else 0.0))
    worst = max((v for _, v in items), default=0.0)
    return ResidualReport(worst <= tol, worst, items)


def check_multipath_property(data: MTLZData, tol: float = 1e-12) -> ResidualReport:
    items = []
    for p in data.graph.distance2_pairs():
        total = np.zeros((data.dimension, data.dimension))
        for c in p.common:
            w = math.sqrt(data.magnitude(p.a, c) * data.magnitude(p.b, c))
            total += w * wedge(data.form(p.a, c), data.form(p.b, c))
        items.append(((p.a, p.b), float(np.max(np.abs(total))) if total.size else 0.0))
    worst = max((v for _, v in items), default=0.0)
    return ResidualReport(worst <= tol, worst, items)


def independence_violations(data: MTLZData, tol: float = 1e-12) -> list[tuple[int, int, int]]:
    """Adjacent edge pairs ``(a, c, b)`` whose forms on a-c and b-c are parallel."""
    out = []
    g = data.graph
    for c in range(g.n):
        nb = g.neighbors(c)
        for i, a in enumerate(nb):
            for b in nb[i + 1:]:
                if np.max(np.abs(wedge(data.form(a, c), data.form(b, c)))) <= tol:
                    out.append((a, c, b))
    return out


def c4_example(sign_pattern: Sequence[int] = (1, -1, -1, 1)) -> MTLZData:
    """Q2 data built from the non-bipartite transform at zero rapidity.

    Vertices 0..3 stand for 1..4; edges 1-3, 1-4, 2-4, 2-3. ``sign_pattern``
    gives s^{13}, s^{24}, s^{14}, s^{23}.
    """
    g = Graph.from_edges(4, [(0, 2), (0, 3), (1, 3), (1, 2)])
    a13, a14 = np.array([1.0, 0.0]), np.array([0.0, 1.0])
    a24, a23 = apply_cycle_transform(a13, a14, CycleTransform(1, -1, 0.0), CycleClass.NON_BIPARTITE)
    s13, s24, s14, s23 = sign_pattern
    o = Orientation({(0, 2): s13, (1, 3): s24, (0, 3): s14, (1, 2): s23})
    forms = {(0, 2): a13, (0, 3): a14, (1, 3): a24, (1, 2): a23}
    return MTLZData(g, o, forms, {e: 1.0 for e in g.edges})
