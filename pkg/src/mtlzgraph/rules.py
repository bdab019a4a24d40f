"""Necessary conditions for a graph to host an MTLZ model.

Each check returns a :class:`RuleResult` whose witness can be re-verified
against the graph. Witnesses are the first violation in lexicographic
order of the listed vertex tuple.

The 1221 pattern is K_{3,3} minus one edge. Its vertices are listed as
``(p, x, y, z, w, q)``: ``p`` is adjacent to ``x, y``; ``x, y`` are both
adjacent to ``z, w``; ``z, w`` are both adjacent to ``q``. An embedding is
rescued by an outside vertex that joins ``p`` to ``z`` or ``w``, or joins
``q`` to ``x`` or ``y``, by a 2-path.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from itertools import combinations

from .graph import Graph, bits


@dataclass(frozen=True)
class RuleResult:
    passed: bool
    witness: tuple[int, ...] | None = None


@dataclass(frozen=True)
class RuleReport:
    no_k3: RuleResult
    two_path: RuleResult
    no_k33: RuleResult
    no_1221: RuleResult
    connected: bool
    bipartite: bool

    @property
    def candidate(self) -> bool:
        return self.no_k3.passed and self.two_path.passed and self.no_k33.passed and self.no_1221.passed

    def to_dict(self) -> dict:
        out = {k: v for k, v in asdict(self).items()}
        for key in ("no_k3", "two_path", "no_k33", "no_1221"):
            res = getattr(self, key)
            out[key] = {"pass": res.passed, "witness": list(res.witness) if res.witness else None}
        out["candidate"] = self.candidate
        return out


def check_no_k3(g: Graph) -> RuleResult:
    for a, b in g.edges:
        later = g.adj[a] & g.adj[b] & ~((1 << (b + 1)) - 1)
        if later:
            return RuleResult(False, (a, b, next(bits(later))))
    return RuleResult(True)


def check_two_path(g: Graph) -> RuleResult:
    """Fails on a distance-2 pair ``(a, b)`` joined through a single vertex ``c``."""
    adj = g.adj
    for a in range(g.n):
        for b in range(a + 1, g.n):
            if adj[a] >> b & 1:
                continue
            common = adj[a] & adj[b]
            if common and not common & (common - 1):
                return RuleResult(False, (a, b, common.bit_length() - 1))
    return RuleResult(True)


def check_no_k33(g: Graph) -> RuleResult:
    """Witness ``(a1, a2, a3, b1, b2, b3)`` with all nine cross edges present."""
    adj = g.adj
    n = g.n
    for a1 in range(n):
        for a2 in range(a1 + 1, n):
            c12 = adj[a1] & adj[a2]
            if c12.bit_count() < 3:
                continue
            for a3 in range(a2 + 1, n):
                c = c12 & adj[a3]
                if c.bit_count() >= 3:
                    bs = list(bits(c))[:3]
                    return RuleResult(False, (a1, a2, a3, *bs))
    return RuleResult(True)


def _outside(vs) -> int:
    m = 0
    for v in vs:
        m |= 1 << v
    return ~m


def iter_1221(g: Graph):
    """Yield every 1221 embedding ``(p, x, y, z, w, q)`` in lexicographic order.

    Each embedding appears twice (read from either end).
    """
    adj = g.adj
    for p in range(g.n):
        nbrs = list(bits(adj[p]))
        for x, y in combinations(nbrs, 2):
            mids = (adj[x] & adj[y]) & ~(1 << p)
            for z, w in combinations(list(bits(mids)), 2):
                tops = adj[z] & adj[w] & ~((1 << p) | (1 << x) | (1 << y))
                for q in bits(tops):
                    yield p, x, y, z, w, q


def is_rescued(g: Graph, emb: tuple[int, ...]) -> bool:
    p, x, y, z, w, q = emb
    adj = g.adj
    out = _outside(emb)
    return bool(
        adj[p] & (adj[z] | adj[w]) & out or adj[q] & (adj[x] | adj[y]) & out
    )


def has_1221(g: Graph) -> bool:
    return next(iter_1221(g), None) is not None


def check_no_1221(g: Graph) -> RuleResult:
    for emb in iter_1221(g):
        if not is_rescued(g, emb):
            return RuleResult(False, emb)
    return RuleResult(True)


def is_candidate(g: Graph) -> RuleReport:
    return RuleReport(
        no_k3=check_no_k3(g),
        two_path=check_two_path(g),
        no_k33=check_no_k33(g),
        no_1221=check_no_1221(g),
        connected=g.is_connected(),
        bipartite=g.is_bipartite(),
    )


def is_zero_two_graph(g: Graph) -> bool:
    """Every pair of distinct vertices has 0 or 2 common neighbours."""
    adj = g.adj
    for a in range(g.n):
        for b in range(a + 1, g.n):
            if (adj[a] & adj[b]).bit_count() not in (0, 2):
                return False
    return True


def diameter_bound_holds(g: Graph) -> bool:
    d = g.diameter()
    return d <= 2 or g.n >= 3 * d - 1


def verify_witness(g: Graph, rule: str, witness: tuple[int, ...]) -> bool:
    """Re-check that a reported witness really violates ``rule`` in ``g``."""
    if rule == "no_k3":
        a, b, c = witness
        return g.has_edge(a, b) and g.has_edge(b, c) and g.has_edge(a, c)
    if rule == "two_path":
        a, b, c = witness
        return not g.has_edge(a, b) and g.common(a, b) == 1 << c
    if rule == "no_k33":
        a_side, b_side = witness[:3], witness[3:]
        return len(set(witness)) == 6 and all(g.has_edge(a, b) for a in a_side for b in b_side)
    if rule == "no_1221":
        p, x, y, z, w, q = witness
        edges = [(p, x), (p, y), (x, z), (x, w), (y, z), (y, w), (z, q), (w, q)]
        return len(set(witness)) == 6 and all(g.has_edge(*e) for e in edges) and not is_rescued(g, witness)
    raise ValueError(f"unknown rule {rule!r}")
