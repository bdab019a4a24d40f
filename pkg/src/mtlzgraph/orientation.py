"""Edge orientations, 4-cycle classes and the r-factor constraint system.

r variables are stored through path signs. For a distance-2 pair ``(a, b)``
with common neighbours ``c_1 < ... < c_k`` each path ``a-c_i-b`` carries a
sign ``sigma_i``, gauge-fixed by ``sigma_1 = +1``, and
``r(c_i, c_j) = sigma_i * sigma_j``. Writing ``sigma = (-1)**s`` turns
every constraint except "the signs are mixed" into a linear equation over
GF(2), so parity around common-neighbour triples holds by construction.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple, Sequence

from .canon import canonical_labeling
from .graph import FourCycle, Graph, GraphError, bits
from .rules import is_candidate


class OrientationError(GraphError):
    pass


class CycleClass(str, enum.Enum):
    BIPARTITE = "bipartite"
    NON_BIPARTITE = "non_bipartite"
    INVALID = "invalid"


class RVar(NamedTuple):
    """r factor of the distance-2 pair ``pair`` for the two paths through ``paths``."""

    pair: tuple[int, int]
    paths: tuple[int, int]


def rvar(a: int, c: int, b: int, d: int) -> RVar:
    """Key of r_{acbd}: pair (a, b), paths through c and d."""
    return RVar((min(a, b), max(a, b)), (min(c, d), max(c, d)))


def default_label(v: int) -> str:
    """One-character vertex labels 1..9, 0 for vertex 9 (the tenth)."""
    return str((v + 1) % 10)


def format_rvar(var: RVar, label=default_label) -> str:
    (a, b), (c, d) = var
    return f"r{label(a)}{label(c)}{label(b)}{label(d)}"


def parse_rvar(text: str, n: int = 10) -> RVar:
    """Inverse of :func:`format_rvar` for one-character labels."""
    digits = text[1:] if text.startswith("r") else text
    if len(digits) != 4 or not digits.isdigit():
        raise ValueError(f"cannot parse r variable {text!r}")
    a, c, b, d = ((int(ch) - 1) % 10 for ch in digits)
    if max(a, b, c, d) >= n:
        raise ValueError(f"{text!r} names a vertex outside 0..{n - 1}")
    return rvar(a, c, b, d)


def r_assignment_to_list(r: Mapping[RVar, int]) -> list[list[int]]:
    """Rows ``[a, c, b, d, value]`` for r_{acbd}, sorted."""
    return [[a, c, b, d, s] for ((a, b), (c, d)), s in sorted(r.items())]


def r_assignment_from_list(rows: Iterable[Sequence[int]]) -> dict[RVar, int]:
    out = {}
    for a, c, b, d, s in rows:
        if s not in (1, -1):
            raise ValueError(f"r value must be +1 or -1, got {s}")
        out[rvar(a, c, b, d)] = s
    return out


# -- orientations ----------------------------------------------------------

@dataclass(frozen=True)
class Orientation:
    """``signs[(a, b)]`` is s^{ab} for a < b; a -1 means the arrow a -> b."""

    signs: Mapping[tuple[int, int], int]

    def sign(self, a: int, b: int) -> int:
        if a < b:
            return self.signs[(a, b)]
        return -self.signs[(b, a)]

    def arrow(self, a: int, b: int) -> bool:
        """True if the edge is drawn a -> b."""
        return self.sign(a, b) == -1

    def reversed(self) -> Orientation:
        return Orientation({e: -s for e, s in self.signs.items()})

    def arcs(self) -> list[tuple[int, int]]:
        return sorted((a, b) if s == -1 else (b, a) for (a, b), s in self.signs.items())

    @classmethod
    def from_arcs(cls, arcs: Iterable[tuple[int, int]]) -> Orientation:
        signs = {}
        for u, v in arcs:
            signs[(min(u, v), max(u, v))] = -1 if u < v else 1
        return cls(signs)

    def to_dict(self) -> dict:
        return {"arcs": [list(a) for a in self.arcs()]}


def classify_cycle(o: Orientation, cyc: FourCycle) -> CycleClass:
    """Classify a fully oriented 4-cycle by its sources and sinks."""
    a, c, b, d = cyc
    walk = ((a, c), (c, b), (b, d), (d, a))
    fwd = [o.arrow(x, y) for x, y in walk]
    if sum(fwd) != 2:
        return CycleClass.INVALID
    # forward edges next to each other: one source and one sink, opposite corners
    if fwd[0] == fwd[1] or fwd[1] == fwd[2]:
        return CycleClass.NON_BIPARTITE
    return CycleClass.BIPARTITE


def _orientation_from_forward(edges, forward) -> Orientation:
    return Orientation({e: (-1 if f else 1) for e, f in zip(edges, forward)})


def all_up_orientation(g: Graph, root: int = 0) -> Orientation:
    """Direct every edge away from ``root`` (lower BFS layer to higher)."""
    if not g.is_bipartite():
        raise OrientationError("all-up orientation needs a bipartite graph")
    dist = g.bfs_distances(root)
    if any(x < 0 for x in dist):
        raise OrientationError("all-up orientation needs a connected graph")
    return Orientation({(a, b): (-1 if dist[a] < dist[b] else 1) for a, b in g.edges})


# -- GF(2) system ----------------------------------------------------------

class Parity:
    """Incremental Gaussian elimination; rows keyed by their lowest bit."""

    __slots__ = ("rows",)

    def __init__(self, rows: dict[int, tuple[int, int]] | None = None):
        self.rows = dict(rows) if rows else {}

    def copy(self) -> Parity:
        return Parity(self.rows)

    def add(self, mask: int, rhs: int) -> bool:
        """Add ``xor(bits of mask) = rhs``; False if that makes the system inconsistent."""
        rows = self.rows
        while mask:
            low = mask & -mask
            row = rows.get(low)
            if row is None:
                rows[low] = (mask, rhs)
                return True
            mask ^= row[0]
            rhs ^= row[1]
        return rhs == 0

    def solve(self, nvars: int) -> list[int] | None:
        """Values for all variables if the system determines them, else None."""
        if len(self.rows) != nvars:
            return None
        val = [0] * nvars
        for low in sorted(self.rows, reverse=True):
            mask, rhs = self.rows[low]
            rest = mask ^ low
            acc = rhs
            for v in bits(rest):
                acc ^= val[v]
            val[low.bit_length() - 1] = acc
        return val


# -- r system --------------------------------------------------------------

@dataclass(frozen=True)
class PairInfo:
    a: int
    b: int
    common: tuple[int, ...]
    offset: int  # bit index of sigma for common[1]; common[0] is the gauge

    @property
    def k(self) -> int:
        return len(self.common)

    def sbit(self, c: int) -> int:
        """Bit mask of sigma_c (0 for the gauge path)."""
        i = self.common.index(c)
        return 0 if i == 0 else 1 << (self.offset + i - 1)


@dataclass(frozen=True)
class RSystem:
    graph: Graph
    pairs: tuple[PairInfo, ...]
    variables: tuple[RVar, ...]
    forced: tuple[RVar, ...]
    cycles: tuple[FourCycle, ...]
    nbits: int
    pair_index: Mapping[tuple[int, int], int] = field(repr=False)

    def var_mask(self, var: RVar) -> int:
        info = self.pairs[self.pair_index[var.pair]]
        return info.sbit(var.paths[0]) ^ info.sbit(var.paths[1])

    def base_parity(self) -> Parity:
        par = Parity()
        for info in self.pairs:
            if info.k == 2:
                par.add(info.sbit(info.common[1]), 1)
        return par

    def link_equation(self, cyc: FourCycle, cls: CycleClass) -> tuple[int, int]:
        """(mask, rhs) tying the two diagonal r's of a classified cycle."""
        a, c, b, d = cyc
        mask = self.var_mask(rvar(a, c, b, d)) ^ self.var_mask(rvar(c, a, d, b))
        return mask, 0 if cls is CycleClass.NON_BIPARTITE else 1

    def assignment_from_bits(self, sval: Sequence[int]) -> dict[RVar, int]:
        out = {}
        for info in self.pairs:
            sig = {c: 0 if i == 0 else sval[info.offset + i - 1] for i, c in enumerate(info.common)}
            for c, d in itertools.combinations(info.common, 2):
                out[RVar((info.a, info.b), (c, d))] = -1 if sig[c] ^ sig[d] else 1
        return out


def build_r_system(g: Graph, *, require_candidate: bool = True) -> RSystem:
    if require_candidate and not is_candidate(g).candidate:
        raise OrientationError("r system is only defined for candidate graphs")
    pairs = []
    variables = []
    forced = []
    offset = 0
    for p in g.distance2_pairs():
        if len(p.common) < 2:
            continue
        pairs.append(PairInfo(p.a, p.b, p.common, offset))
        offset += len(p.common) - 1
        pv = [RVar((p.a, p.b), cd) for cd in itertools.combinations(p.common, 2)]
        variables += pv
        if len(p.common) == 2:
            forced += pv
    return RSystem(
        graph=g,
        pairs=tuple(pairs),
        variables=tuple(variables),
        forced=tuple(forced),
        cycles=tuple(g.four_cycles()),
        nbits=offset,
        pair_index={(p.a, p.b): i for i, p in enumerate(pairs)},
    )


def enumerate_r_solutions(system: RSystem, parity: Parity) -> list[dict[RVar, int]]:
    """Every assignment meeting ``parity`` plus the mixed-sign rule, in DFS order."""
    open_pairs = [p for p in system.pairs if p.k >= 3]
    out: list[dict[RVar, int]] = []

    def dfs(i: int, par: Parity):
        if i == len(open_pairs):
            sval = par.solve(system.nbits)
            if sval is None:  # pragma: no cover - every bit is pinned by now
                raise AssertionError("undetermined sigma bits after full branching")
            out.append(system.assignment_from_bits(sval))
            return
        info = open_pairs[i]
        free = info.k - 1
        for code in range(1, 1 << free):  # code 0 would make every sign +1
            trial = par.copy()
            ok = True
            for j in range(free):
                if not trial.add(1 << (info.offset + j), code >> j & 1):
                    ok = False
                    break
            if ok:
                dfs(i + 1, trial)

    dfs(0, parity)
    return out


def check_r_assignment(system: RSystem, r: Mapping[RVar, int], orientation: Orientation | None = None) -> list[str]:
    """List every violated constraint family; empty means the assignment is valid."""
    problems = []
    missing = [v for v in system.variables if v not in r]
    if missing:
        return [f"missing {format_rvar(missing[0])}"]
    for v in system.forced:
        if r[v] != -1:
            problems.append(f"forced {format_rvar(v)} is not -1")
    for info in system.pairs:
        key = (info.a, info.b)
        for c, d, e in itertools.combinations(info.common, 3):
            prod = r[RVar(key, (c, d))] * r[RVar(key, (d, e))] * r[RVar(key, (c, e))]
            if prod != 1:
                problems.append(f"parity fails on pair {key} paths {(c, d, e)}")
        ref = info.common[0]
        sig = [1] + [r[RVar(key, (ref, c))] for c in info.common[1:]]
        if len(set(sig)) == 1:
            problems.append(f"pair {key} has no mixed signs")
    if orientation is not None:
        for cyc in system.cycles:
            cls = classify_cycle(orientation, cyc)
            if cls is CycleClass.INVALID:
                problems.append(f"cycle {tuple(cyc)} is invalidly oriented")
                continue
            a, c, b, d = cyc
            x, y = r[rvar(a, c, b, d)], r[rvar(c, a, d, b)]
            if (x == y) != (cls is CycleClass.NON_BIPARTITE):
                problems.append(f"cycle link fails on {tuple(cyc)}")
    return problems


def sigma_from_r(info_common: Sequence[int], pair: tuple[int, int], r: Mapping[RVar, int]) -> dict[int, int]:
    """Path signs of one pair, reference path (smallest neighbour) fixed to +1."""
    ref = info_common[0]
    sig = {ref: 1}
    for c in info_common[1:]:
        sig[c] = r[RVar(pair, (ref, c))]
    for c, d in itertools.combinations(info_common, 2):
        if sig[c] * sig[d] != r[RVar(pair, (c, d))]:
            raise OrientationError(f"inconsistent r values on pair {pair}")
    return sig


# -- branch search ---------------------------------------------------------

@dataclass
class BranchStats:
    nodes: int = 0
    invalid_cycle: int = 0
    link_conflict: int = 0
    no_r_solution: int = 0
    leaves: int = 0

    def to_dict(self) -> dict:
        return dict(vars(self))


@dataclass
class OrientationResult:
    orientation: Orientation
    r_solutions: list[dict[RVar, int]]
    class_key: tuple
    members: int = 1  # raw orientations (first edge fixed) in this class

    def positives(self) -> list[set[str]]:
        return [{format_rvar(v) for v, s in sol.items() if s == 1} for sol in self.r_solutions]

    def to_dict(self) -> dict:
        return {
            "orientation": self.orientation.to_dict(),
            "members": self.members,
            "r_solutions": [r_assignment_to_list(sol) for sol in self.r_solutions],
        }


@dataclass
class BranchResult:
    classes: list[OrientationResult]
    raw: list[OrientationResult]
    stats: BranchStats

    def __len__(self):
        return len(self.classes)

    def __iter__(self):
        return iter(self.classes)

    def __getitem__(self, i):
        return self.classes[i]


def orientation_class_key(g: Graph, o: Orientation) -> tuple:
    """Equal for orientations related by a graph isomorphism and/or global reversal."""
    n = g.n
    mat = [[0] * n for _ in range(n)]
    for u, v in o.arcs():
        mat[u][v] = 1
        mat[v][u] = 2
    cert, _ = canonical_labeling(mat)
    rev = [[(3 - x) if x else 0 for x in row] for row in mat]
    rcert, _ = canonical_labeling(rev)
    return min(cert, rcert)


def _edge_order(g: Graph) -> list[tuple[int, int]]:
    dist = g.bfs_distances(0)
    order = sorted(range(g.n), key=lambda v: (dist[v], v))
    pos = {v: i for i, v in enumerate(order)}
    return sorted(g.edges, key=lambda e: (max(pos[e[0]], pos[e[1]]), min(pos[e[0]], pos[e[1]])))


def branch_search(g: Graph, *, keep_raw: bool = True) -> BranchResult:
    """Orient edges one at a time, pruning on invalid cycles and r conflicts.

    The first edge is held fixed because reversing every arrow preserves
    each cycle's class and hence the r solutions.
    """
    system = build_r_system(g)
    edges = _edge_order(g)
    eidx = {e: i for i, e in enumerate(edges)}
    closing: list[list[FourCycle]] = [[] for _ in edges]
    for cyc in system.cycles:
        closing[max(eidx[e] for e in cyc.edges)].append(cyc)
    stats = BranchStats()
    raw: list[OrientationResult] = []
    forward = [False] * len(edges)

    def partial(upto: int) -> Orientation:
        return _orientation_from_forward(edges[: upto + 1], forward[: upto + 1])

    def dfs(i: int, par: Parity):
        stats.nodes += 1
        if i == len(edges):
            stats.leaves += 1
            o = _orientation_from_forward(edges, forward)
            sols = enumerate_r_solutions(system, par)
            if not sols:
                stats.no_r_solution += 1
                return
            raw.append(OrientationResult(o, sols, ()))
            return
        choices = (True,) if i == 0 else (True, False)
        for f in choices:
            forward[i] = f
            if not closing[i]:
                dfs(i + 1, par)
                continue
            o = partial(i)
            trial = par.copy()
            ok = True
            for cyc in closing[i]:
                cls = classify_cycle(o, cyc)
                if cls is CycleClass.INVALID:
                    stats.invalid_cycle += 1
                    ok = False
                    break
                if not trial.add(*system.link_equation(cyc, cls)):
                    stats.link_conflict += 1
                    ok = False
                    break
            if ok:
                dfs(i + 1, trial)

    if edges:
        dfs(0, system.base_parity())

    classes: dict[tuple, OrientationResult] = {}
    for res in raw:
        res.class_key = orientation_class_key(g, res.orientation)
        known = classes.get(res.class_key)
        if known is None:
            classes[res.class_key] = OrientationResult(res.orientation, res.r_solutions, res.class_key)
        else:
            known.members += 1
    ordered = [classes[k] for k in sorted(classes)]
    return BranchResult(ordered, raw if keep_raw else [], stats)
