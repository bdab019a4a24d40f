"""Immutable simple graphs on at most 64 vertices, stored as neighbour bitsets.

Every structural query used by the rule checks, the search and the
orientation analysis lives here: distances, bipartiteness, BFS layers,
4-cycles, distance-2 pairs, graph6 I/O and Cartesian products.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, NamedTuple, Sequence

MAX_VERTICES = 64


class GraphError(ValueError):
    """Raised for malformed graphs or queries outside a graph's domain."""


class DisconnectedGraphError(GraphError):
    """Raised when a distance is infinite."""


class Graph6Error(GraphError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


def bits(mask: int) -> Iterator[int]:
    """Yield the indices of set bits in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class FourCycle(NamedTuple):
    """A 4-cycle a-c-b-d-a; ``a`` is its smallest vertex and ``c < d``."""

    a: int
    c: int
    b: int
    d: int

    @property
    def diagonals(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return (self.a, self.b) if self.a < self.b else (self.b, self.a), (self.c, self.d)

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        a, c, b, d = self
        return tuple((min(x, y), max(x, y)) for x, y in ((a, c), (c, b), (b, d), (d, a)))


class DistanceTwoPair(NamedTuple):
    a: int
    b: int
    common: tuple[int, ...]


class LayerDecomposition(NamedTuple):
    root: int
    layers: tuple[tuple[int, ...], ...]

    @property
    def sequence(self) -> tuple[int, ...]:
        return tuple(len(layer) for layer in self.layers)


@dataclass(frozen=True, eq=False)
class Graph:
    """A simple undirected graph with vertices ``0..n-1``.

    Use :meth:`from_edges` to build one; the constructor expects already
    consistent bitsets.
    """

    n: int
    adj: tuple[int, ...]

    def __post_init__(self):
        if not 0 <= self.n <= MAX_VERTICES:
            raise GraphError(f"vertex count {self.n} outside 0..{MAX_VERTICES}")
        if len(self.adj) != self.n:
            raise GraphError("adjacency length does not match n")
        full = (1 << self.n) - 1
        for v, row in enumerate(self.adj):
            if row >> v & 1:
                raise GraphError(f"self-loop at vertex {v}")
            if row & ~full:
                raise GraphError(f"vertex {v} has out-of-range neighbours")
            for w in bits(row):
                if not self.adj[w] >> v & 1:
                    raise GraphError(f"asymmetric adjacency between {v} and {w}")

    @classmethod
    def trusted(cls, n: int, adj: tuple[int, ...]) -> Graph:
        """Wrap bitsets known to be valid, skipping the O(n^2) checks (hot loops only)."""
        g = object.__new__(cls)
        object.__setattr__(g, "n", n)
        object.__setattr__(g, "adj", adj)
        return g

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Graph:
        if not 0 <= n <= MAX_VERTICES:
            raise GraphError(f"vertex count {n} outside 0..{MAX_VERTICES}")
        adj = [0] * n
        for a, b in edges:
            if a == b:
                raise GraphError(f"self-loop at vertex {a}")
            if not (0 <= a < n and 0 <= b < n):
                raise GraphError(f"edge ({a}, {b}) out of range for n={n}")
            adj[a] |= 1 << b
            adj[b] |= 1 << a
        return cls(n, tuple(adj))

    # -- basic accessors -------------------------------------------------

    @cached_property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple((a, b) for a in range(self.n) for b in bits(self.adj[a] >> (a + 1) << (a + 1)))

    @property
    def num_edges(self) -> int:
        return sum(row.bit_count() for row in self.adj) // 2

    def has_edge(self, a: int, b: int) -> bool:
        return bool(self.adj[a] >> b & 1)

    def neighbors(self, v: int) -> list[int]:
        return list(bits(self.adj[v]))

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def degrees(self) -> list[int]:
        return [row.bit_count() for row in self.adj]

    def common(self, a: int, b: int) -> int:
        """Bitset of common neighbours of ``a`` and ``b``."""
        return self.adj[a] & self.adj[b]

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __hash__(self):
        return hash((self.n, self.adj))

    def relabel(self, perm: Sequence[int]) -> Graph:
        """Return the graph with vertex ``v`` renamed ``perm[v]``."""
        if sorted(perm) != list(range(self.n)):
            raise GraphError("relabeling is not a permutation")
        return Graph.from_edges(self.n, ((perm[a], perm[b]) for a, b in self.edges))

    def induced(self, vertices: Sequence[int]) -> Graph:
        index = {v: i for i, v in enumerate(vertices)}
        return Graph.from_edges(
            len(vertices), ((index[a], index[b]) for a, b in self.edges if a in index and b in index)
        )

    def add_edges(self, edges: Iterable[tuple[int, int]]) -> Graph:
        return Graph.from_edges(self.n, list(self.edges) + list(edges))

    # -- distances -------------------------------------------------------

    def bfs_distances(self, root: int) -> list[int]:
        """Distances from ``root``; unreachable vertices get -1."""
        dist = [-1] * self.n
        dist[root] = 0
        frontier = 1 << root
        seen = frontier
        level = 0
        while frontier:
            level += 1
            nxt = 0
            for v in bits(frontier):
                nxt |= self.adj[v]
            nxt &= ~seen
            seen |= nxt
            for v in bits(nxt):
                dist[v] = level
            frontier = nxt
        return dist

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        seen = frontier = 1
        while frontier:
            nxt = 0
            for v in bits(frontier):
                nxt |= self.adj[v]
            frontier = nxt & ~seen
            seen |= frontier
        return seen == (1 << self.n) - 1

    @cached_property
    def distance_matrix(self) -> tuple[tuple[int, ...], ...]:
        rows = tuple(tuple(self.bfs_distances(v)) for v in range(self.n))
        if any(d < 0 for row in rows for d in row):
            raise DisconnectedGraphError("graph is disconnected: infinite distance")
        return rows

    def distance(self, a: int, b: int) -> int:
        d = self.bfs_distances(a)[b]
        if d < 0:
            raise DisconnectedGraphError(f"vertices {a} and {b} are in different components")
        return d

    def diameter(self) -> int:
        return max((max(row) for row in self.distance_matrix), default=0)

    def layer_decomposition(self, root: int) -> LayerDecomposition:
        dist = self.bfs_distances(root)
        if min(dist, default=0) < 0:
            raise DisconnectedGraphError("layer decomposition needs a connected graph")
        layers: list[list[int]] = [[] for _ in range(max(dist) + 1)]
        for v, d in enumerate(dist):
            layers[d].append(v)
        return LayerDecomposition(root, tuple(tuple(layer) for layer in layers))

    # -- bipartiteness ---------------------------------------------------

    def two_coloring(self) -> tuple[list[int] | None, list[int] | None]:
        """Return ``(coloring, None)`` or ``(None, odd_cycle)``.

        The odd cycle is a closed vertex walk without repetition, listed
        once around (the first vertex is not repeated at the end).
        """
        color = [-1] * self.n
        parent = [-1] * self.n
        depth = [0] * self.n
        for start in range(self.n):
            if color[start] >= 0:
                continue
            color[start] = 0
            queue = deque([start])
            while queue:
                v = queue.popleft()
                for w in bits(self.adj[v]):
                    if color[w] < 0:
                        color[w] = color[v] ^ 1
                        parent[w] = v
                        depth[w] = depth[v] + 1
                        queue.append(w)
                    elif color[w] == color[v]:
                        return None, _tree_cycle(v, w, parent, depth)
        return color, None

    def is_bipartite(self) -> bool:
        return self.two_coloring()[0] is not None

    # -- local structure -------------------------------------------------

    def distance2_pairs(self) -> list[DistanceTwoPair]:
        out = []
        for a in range(self.n):
            for b in range(a + 1, self.n):
                if self.adj[a] >> b & 1:
                    continue
                common = self.adj[a] & self.adj[b]
                if common:
                    out.append(DistanceTwoPair(a, b, tuple(bits(common))))
        return out

    def four_cycles(self) -> list[FourCycle]:
        out = []
        for a in range(self.n):
            for b in range(a + 1, self.n):
                common = self.adj[a] & self.adj[b] & ~((1 << (a + 1)) - 1)
                if common.bit_count() < 2:
                    continue
                cs = list(bits(common))
                for i, c in enumerate(cs):
                    for d in cs[i + 1:]:
                        out.append(FourCycle(a, c, b, d))
        return sorted(out)

    def has_triangle(self) -> bool:
        return any(self.adj[a] & self.adj[b] for a, b in self.edges)

    # -- graph6 ----------------------------------------------------------

    def to_graph6(self) -> str:
        return emit_graph6(self)


def _tree_cycle(v: int, w: int, parent: list[int], depth: list[int]) -> list[int]:
    left, right = [v], [w]
    while depth[left[-1]] > depth[right[-1]]:
        left.append(parent[left[-1]])
    while depth[right[-1]] > depth[left[-1]]:
        right.append(parent[right[-1]])
    while left[-1] != right[-1]:
        left.append(parent[left[-1]])
        right.append(parent[right[-1]])
    return left + right[-2::-1]


# -- graph6 codec --------------------------------------------------------

_G6_HEADER = ">>graph6<<"


def emit_graph6(g: Graph) -> str:
    n = g.n
    if n <= 62:
        head = chr(n + 63)
    else:
        head = "~" + "".join(chr(((n >> shift) & 63) + 63) for shift in (12, 6, 0))
    out = []
    acc = nbits = 0
    for j in range(1, n):
        row = g.adj[j]
        for i in range(j):
            acc = acc << 1 | (row >> i & 1)
            nbits += 1
            if nbits == 6:
                out.append(chr(acc + 63))
                acc = nbits = 0
    if nbits:
        out.append(chr((acc << (6 - nbits)) + 63))
    return head + "".join(out)


def parse_graph6(text: str) -> Graph:
    data = text.strip()
    base = 0
    if data.startswith(_G6_HEADER):
        data = data[len(_G6_HEADER):]
        base = len(_G6_HEADER)
    if not data:
        raise Graph6Error("empty graph6 record", base)
    for i, ch in enumerate(data):
        if not 63 <= ord(ch) <= 126:
            raise Graph6Error(f"invalid graph6 character {ch!r}", base + i)
    if data[0] != "~":
        n, pos = ord(data[0]) - 63, 1
    else:
        if len(data) < 4 or data[1] == "~":
            raise Graph6Error("unsupported or truncated large-n header", base + 1)
        n = 0
        for ch in data[1:4]:
            n = n << 6 | (ord(ch) - 63)
        pos = 4
        if n <= 62:
            raise Graph6Error("non-canonical long header for small n", base)
    if n > MAX_VERTICES:
        raise Graph6Error(f"vertex count {n} exceeds {MAX_VERTICES}", base)
    nbits = n * (n - 1) // 2
    expected = pos + (nbits + 5) // 6
    if len(data) < expected:
        raise Graph6Error("truncated adjacency data", base + len(data))
    if len(data) > expected:
        raise Graph6Error("trailing data after adjacency", base + expected)
    adj = [0] * n
    k = 0
    for j in range(1, n):
        for i in range(j):
            byte = ord(data[pos + k // 6]) - 63
            if byte >> (5 - k % 6) & 1:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
            k += 1
    if nbits % 6:
        last = ord(data[expected - 1]) - 63
        if last & ((1 << (6 - nbits % 6)) - 1):
            raise Graph6Error("nonzero padding bits", base + expected - 1)
    return Graph(n, tuple(adj))


# -- constructions -------------------------------------------------------

def cartesian_product(g1: Graph, g2: Graph) -> Graph:
    """Vertex ``(u1, u2)`` becomes ``u1 * g2.n + u2``."""
    n = g1.n * g2.n
    if n > MAX_VERTICES:
        raise GraphError(f"product has {n} vertices, capacity is {MAX_VERTICES}")
    edges = []
    for u1 in range(g1.n):
        for a, b in g2.edges:
            edges.append((u1 * g2.n + a, u1 * g2.n + b))
    for a, b in g1.edges:
        for u2 in range(g2.n):
            edges.append((a * g2.n + u2, b * g2.n + u2))
    return Graph.from_edges(n, edges)


def complete_bipartite(m: int, n: int) -> Graph:
    return Graph.from_edges(m + n, ((a, m + b) for a in range(m) for b in range(n)))


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, ((i, (i + 1) % n) for i in range(n)))


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, ((i, i + 1) for i in range(n - 1)))


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, ((a, b) for a in range(n) for b in range(a + 1, n)))
