"""Seeded exhaustive enumeration of candidate graphs with diameter >= 3.

Every such candidate contains one of two 8-vertex minimal subgraphs as an
induced subgraph. The search fixes a seed on vertices 0..7, adds ``n - 8``
new vertices and enumerates the undetermined edges.

Two reductions keep the tree small without losing any isomorphism class:

* new vertices are interchangeable, so their seed neighbourhoods are
  enumerated as a non-decreasing sequence of codes;
* odd cycles never disappear when edges are added, so a new vertex is only
  joined to one colour class of the (bipartite) seed.

Work is cut into tasks that do not depend on the worker count, which makes
the catalog identical for any ``threads`` and across checkpoint restarts.
"""

from __future__ import annotations

import dataclasses
import enum
import hashlib
import itertools
import json
import logging
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from .canon import canonical_form
from .graph import Graph, bits, parse_graph6
from .rules import check_no_1221, check_no_k33, check_two_path, has_1221, is_candidate

log = logging.getLogger(__name__)

CHECKPOINT_VERSION = 1
RULE_ORDER = ("connected", "bipartite", "layering", "two_path", "no_k33", "no_1221")


class SearchError(RuntimeError):
    pass


class CheckpointError(SearchError):
    pass


class SearchInterrupted(SearchError):
    """Raised by the test hook that simulates a killed run."""


class SeedKind(str, enum.Enum):
    FREE1221 = "free"
    WITH1221 = "with1221"


@dataclass(frozen=True)
class SeedGraph:
    kind: SeedKind
    base_edges: tuple[tuple[int, int], ...]
    optional_edges: tuple[tuple[int, int], ...]

    def graph(self, optional: Iterable[tuple[int, int]] = ()) -> Graph:
        return Graph.from_edges(8, list(self.base_edges) + list(optional))

    @property
    def layers(self) -> tuple[tuple[int, ...], ...]:
        """Seed vertices by distance from vertex 0 (label 1)."""
        return (0,), (1, 4, 6), (2, 5, 7), (3,)


def _zero_based(edges):
    return tuple((a - 1, b - 1) for a, b in edges)


def minimal_seeds() -> tuple[SeedGraph, SeedGraph]:
    free = SeedGraph(
        SeedKind.FREE1221,
        _zero_based([(1, 2), (2, 3), (3, 4), (1, 5), (3, 5), (2, 6), (4, 6), (1, 7), (6, 7), (4, 8), (5, 8)]),
        _zero_based([(7, 8)]),
    )
    with1221 = SeedGraph(
        SeedKind.WITH1221,
        _zero_based([(1, 2), (2, 3), (3, 4), (1, 5), (3, 5), (2, 6), (4, 6), (5, 6), (4, 8), (5, 8), (1, 7), (7, 8)]),
        _zero_based([(3, 7)]),
    )
    return free, with1221


def decision_variable_count(n: int) -> int:
    """Undetermined vertex pairs once a seed is fixed."""
    return 1 + 8 * (n - 8) + (n - 8) * (n - 9) // 2


def layer_sequences(n: int, d: int | None = None) -> list[tuple[int, ...]]:
    """Layer-size sequences with outer layers >= 1 and inner layers >= 3.

    Sequences are listed once per reversal pair (the smaller one is kept).
    """
    out = set()
    depths = [d] if d is not None else range(3, (n + 1) // 3 + 1)
    for depth in depths:
        if depth < 3 or 3 * depth - 1 > n:
            continue
        for seq in _compositions(n, depth + 1, [1] + [3] * (depth - 1) + [1]):
            out.add(min(seq, seq[::-1]))
    return sorted(out, key=lambda s: (len(s), s))


def _compositions(total: int, parts: int, minima: list[int]) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        if total >= minima[0]:
            yield (total,)
        return
    for first in range(minima[0], total - sum(minima[1:]) + 1):
        for rest in _compositions(total - first, parts - 1, minima[1:]):
            yield (first, *rest)


# -- catalog ---------------------------------------------------------------

@dataclass
class CatalogEntry:
    key: str
    graph6: str
    n: int
    diameter: int
    degrees: tuple[int, ...]
    has_1221: bool
    seeds: tuple[str, ...]

    def to_record(self) -> dict:
        rec = dataclasses.asdict(self)
        rec["degrees"] = list(self.degrees)
        rec["seeds"] = list(self.seeds)
        return rec

    @classmethod
    def from_record(cls, rec: dict) -> CatalogEntry:
        return cls(
            key=rec["key"], graph6=rec["graph6"], n=rec["n"], diameter=rec["diameter"],
            degrees=tuple(rec["degrees"]), has_1221=rec["has_1221"], seeds=tuple(rec["seeds"]),
        )

    @property
    def graph(self) -> Graph:
        return parse_graph6(self.graph6)


def _empty_counters() -> dict:
    return {"examined": 0, "passed": 0, "pruned": 0, "failures": {r: 0 for r in RULE_ORDER}}


@dataclass
class Catalog:
    entries: dict[str, CatalogEntry] = field(default_factory=dict)
    counters: dict = field(default_factory=_empty_counters)

    def add_graph(self, g: Graph, seed: str) -> None:
        self.counters["passed"] += 1
        cf = canonical_form(g)
        key = cf.key.hex()
        entry = self.entries.get(key)
        if entry is None:
            canon = g.relabel(cf.relabeling)
            self.entries[key] = CatalogEntry(
                key=key,
                graph6=cf.key.decode("ascii"),
                n=g.n,
                diameter=canon.diameter(),
                degrees=tuple(sorted(canon.degrees(), reverse=True)),
                has_1221=has_1221(canon),
                seeds=(seed,),
            )
        elif seed not in entry.seeds:
            entry.seeds = tuple(sorted(entry.seeds + (seed,)))

    def merge(self, other: Catalog) -> None:
        for key, entry in other.entries.items():
            mine = self.entries.get(key)
            if mine is None:
                self.entries[key] = dataclasses.replace(entry)
            else:
                mine.seeds = tuple(sorted(set(mine.seeds) | set(entry.seeds)))
        for k in ("examined", "passed", "pruned"):
            self.counters[k] += other.counters[k]
        for r, v in other.counters["failures"].items():
            self.counters["failures"][r] += v

    @property
    def duplicates(self) -> int:
        return self.counters["passed"] - len(self.entries)

    def sorted_entries(self) -> list[CatalogEntry]:
        return [self.entries[k] for k in sorted(self.entries)]

    def counts(self) -> tuple[int, int]:
        """(1221-free, with 1221)."""
        with_ = sum(e.has_1221 for e in self.entries.values())
        return len(self.entries) - with_, with_

    def summary(self) -> dict:
        free, with_ = self.counts()
        return {
            "entries": len(self.entries),
            "free1221": free,
            "with1221": with_,
            "examined": self.counters["examined"],
            "passed": self.counters["passed"],
            "pruned": self.counters["pruned"],
            "duplicates": self.duplicates,
            "failures": dict(self.counters["failures"]),
        }

    def to_jsonl(self, extra: dict | None = None) -> str:
        lines = [json.dumps(e.to_record(), sort_keys=True) for e in self.sorted_entries()]
        summary = self.summary()
        if extra:
            summary.update(extra)
        lines.append(json.dumps({"summary": summary}, sort_keys=True))
        return "\n".join(lines) + "\n"

    def to_state(self) -> dict:
        return {
            "entries": [e.to_record() for e in self.sorted_entries()],
            "counters": self.counters,
        }

    @classmethod
    def from_state(cls, state: dict) -> Catalog:
        cat = cls()
        for rec in state["entries"]:
            e = CatalogEntry.from_record(rec)
            cat.entries[e.key] = e
        cat.counters = json.loads(json.dumps(state["counters"]))
        return cat

    @classmethod
    def from_jsonl(cls, text: str) -> tuple[Catalog, dict | None]:
        cat = cls()
        summary = None
        for line in text.splitlines():
            if not line.strip():
                continue
            rec = json.loads(line)
            if "summary" in rec:
                summary = rec["summary"]
                continue
            e = CatalogEntry.from_record(rec)
            cat.entries[e.key] = e
        return cat, summary


# -- configuration and tasks ----------------------------------------------

@dataclass(frozen=True)
class SearchConfig:
    n: int
    strategy: str = "basic"  # "basic" | "layered"
    seeds: str = "both"  # "both" | "free" | "with1221"
    threads: int = 1
    checkpoint: str | None = None
    checkpoint_every: int = 10**7
    rng_seed: int = 0  # reserved; exhaustive mode draws no random numbers

    def __post_init__(self):
        if self.n < 8:
            raise SearchError("seeded search needs n >= 8")
        if self.n > 64:
            raise SearchError("capacity overflow: n > 64")
        if self.strategy not in ("basic", "layered"):
            raise SearchError(f"unknown strategy {self.strategy!r}")
        if self.seeds not in ("both", "free", "with1221"):
            raise SearchError(f"unknown seed selection {self.seeds!r}")

    def digest(self) -> str:
        ident = {"n": self.n, "strategy": self.strategy, "seeds": self.seeds, "version": CHECKPOINT_VERSION}
        return hashlib.sha256(json.dumps(ident, sort_keys=True).encode()).hexdigest()

    def selected_seeds(self) -> list[SeedGraph]:
        free, with1221 = minimal_seeds()
        return {"both": [free, with1221], "free": [free], "with1221": [with1221]}[self.seeds]


def _seed_codes(seed: SeedGraph, allowed: int = 0xFF) -> list[int]:
    """Neighbourhood codes inside one colour class of the seed, 0 first."""
    color, _ = seed.graph().two_coloring()
    codes = [0]
    for side in (0, 1):
        members = [v for v in range(8) if color[v] == side and allowed >> v & 1]
        for r in range(1, len(members) + 1):
            for sub in itertools.combinations(members, r):
                codes.append(sum(1 << v for v in sub))
    return codes


def _tasks(config: SearchConfig) -> list[tuple]:
    tasks = []
    k = config.n - 8
    for seed in config.selected_seeds():
        opt_sets = [()] + [(e,) for e in seed.optional_edges]
        if config.strategy == "basic":
            ncodes = len(_seed_codes(seed))
            for opt in opt_sets:
                firsts = range(ncodes) if k else [None]
                for first in firsts:
                    tasks.append((seed.kind.value, opt, first))
        else:
            for opt in opt_sets:
                for seq in _rooted_sequences(config.n):
                    tasks.append((seed.kind.value, opt, seq))
    return tasks


def _rooted_sequences(n: int) -> list[tuple[int, ...]]:
    """Layer sizes seen from seed vertex 0; the seed fills 1, 3, 3, 1."""
    out = []
    for depth in range(3, (n + 1) // 3 + 1):
        minima = [1] + [3] * (depth - 1) + [1]
        for seq in _compositions(n, depth + 1, minima):
            if seq[0] == 1:
                out.append(seq)
    return out


def _seed_by_kind(kind: str) -> SeedGraph:
    return {s.kind.value: s for s in minimal_seeds()}[kind]


def _leaf_failure(g: Graph, check_bipartite: bool) -> str | None:
    if not g.is_connected():
        return "connected"
    if check_bipartite and not g.is_bipartite():
        return "bipartite"
    if not check_two_path(g).passed:
        return "two_path"
    if not check_no_k33(g).passed:
        return "no_k33"
    if not check_no_1221(g).passed:
        return "no_1221"
    return None


def _record_leaf(cat: Catalog, adj: list[int], n: int, kind: str, check_bipartite: bool) -> None:
    cat.counters["examined"] += 1
    g = Graph.trusted(n, tuple(adj))
    failure = _leaf_failure(g, check_bipartite)
    if failure:
        cat.counters["failures"][failure] += 1
    else:
        cat.add_graph(g, kind)


def _run_basic(n: int, kind: str, opt: tuple, first: int | None) -> Catalog:
    seed = _seed_by_kind(kind)
    base = seed.graph(opt)
    color, _ = base.two_coloring()
    codes = _seed_codes(seed)
    code_color = []
    for c in codes:
        code_color.append(None if c == 0 else 1 - color[next(bits(c))])
    k = n - 8
    cat = Catalog()
    seed_adj = list(base.adj) + [0] * k

    if k == 0:
        _record_leaf(cat, seed_adj, n, kind, False)
        return cat

    new_pairs = list(itertools.combinations(range(8, n), 2))

    def finish(chosen: list[int]):
        adj = list(seed_adj)
        for i, ci in enumerate(chosen):
            v = 8 + i
            code = codes[ci]
            adj[v] = code
            for w in bits(code):
                adj[w] |= 1 << v
        if not check_no_k33(Graph.trusted(n, tuple(adj))).passed:
            cat.counters["pruned"] += 1
            return
        colors = [code_color[ci] for ci in chosen]
        uncolored = any(c is None for c in colors)
        allowed = [
            (a, b) for a, b in new_pairs
            if colors[a - 8] is None or colors[b - 8] is None or colors[a - 8] != colors[b - 8]
        ]
        for r in range(len(allowed) + 1):
            for sub in itertools.combinations(allowed, r):
                leaf = list(adj)
                for a, b in sub:
                    leaf[a] |= 1 << b
                    leaf[b] |= 1 << a
                _record_leaf(cat, leaf, n, kind, uncolored)

    def extend(chosen: list[int]):
        if len(chosen) == k:
            finish(chosen)
            return
        for ci in range(chosen[-1], len(codes)):
            chosen.append(ci)
            extend(chosen)
            chosen.pop()

    extend([first])
    return cat


def _run_layered(n: int, kind: str, opt: tuple, seq: tuple[int, ...]) -> Catalog:
    seed = _seed_by_kind(kind)
    base = seed.graph(opt)
    cat = Catalog()
    seed_layers = list(seed.layers) + [()] * (len(seq) - 4)
    extra = [seq[i] - len(seed_layers[i]) for i in range(len(seq))]
    if any(x < 0 for x in extra) or extra[0] != 0:
        return cat
    layer_of = {}
    for i, layer in enumerate(seed_layers):
        for v in layer:
            layer_of[v] = i
    new_layer = []
    for i, x in enumerate(extra):
        new_layer += [i] * x
    for j, i in enumerate(new_layer):
        layer_of[8 + j] = i
    k = n - 8

    def seed_mask(i: int) -> int:
        m = 0
        for j in (i - 1, i + 1):
            if 0 <= j < len(seed_layers):
                for v in seed_layers[j]:
                    m |= 1 << v
        return m

    layer_codes = {}
    for i in set(new_layer):
        mask = seed_mask(i)
        members = list(bits(mask))
        layer_codes[i] = [
            sum(1 << v for v in sub)
            for r in range(len(members) + 1)
            for sub in itertools.combinations(members, r)
        ]
    new_pairs = [
        (a, b) for a, b in itertools.combinations(range(8, n), 2)
        if abs(layer_of[a] - layer_of[b]) == 1
    ]
    down_mask = [0] * n
    for v in range(n):
        for w in range(n):
            if layer_of[w] == layer_of[v] - 1:
                down_mask[v] |= 1 << w
    seed_adj = list(base.adj) + [0] * k

    def finish(chosen: list[int]):
        adj = list(seed_adj)
        for j, ci in enumerate(chosen):
            v = 8 + j
            code = layer_codes[new_layer[j]][ci]
            adj[v] = code
            for w in bits(code):
                adj[w] |= 1 << v
        if not check_no_k33(Graph.trusted(n, tuple(adj))).passed:
            cat.counters["pruned"] += 1
            return
        for r in range(len(new_pairs) + 1):
            for sub in itertools.combinations(new_pairs, r):
                leaf = list(adj)
                for a, b in sub:
                    leaf[a] |= 1 << b
                    leaf[b] |= 1 << a
                cat.counters["examined"] += 1
                if any(not leaf[v] & down_mask[v] for v in range(8, n)):
                    cat.counters["failures"]["layering"] += 1
                    continue
                g = Graph.trusted(n, tuple(leaf))
                failure = _leaf_failure(g, False)
                if failure:
                    cat.counters["failures"][failure] += 1
                else:
                    cat.add_graph(g, kind)

    def extend(chosen: list[int]):
        j = len(chosen)
        if j == k:
            finish(chosen)
            return
        same_layer = j > 0 and new_layer[j - 1] == new_layer[j]
        start = chosen[-1] if same_layer else 0
        for ci in range(start, len(layer_codes[new_layer[j]])):
            chosen.append(ci)
            extend(chosen)
            chosen.pop()

    extend([])
    return cat


def _run_task(args: tuple) -> dict:
    strategy, n, task = args
    kind, opt, third = task
    opt = tuple(tuple(e) for e in opt)
    if strategy == "basic":
        cat = _run_basic(n, kind, opt, third)
    else:
        cat = _run_layered(n, kind, opt, tuple(third))
    return cat.to_state()


# -- checkpointing ---------------------------------------------------------

def _write_atomic(path: Path, payload: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            json.dump(payload, fh, sort_keys=True)
        os.replace(tmp, path)
    except OSError as exc:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise SearchError(f"checkpoint write failed: {exc}") from exc


def _state_digest(state: dict) -> str:
    return hashlib.sha256(json.dumps(state, sort_keys=True).encode()).hexdigest()


def load_checkpoint(path: str | Path, config: SearchConfig) -> tuple[int, Catalog]:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise CheckpointError(f"corrupt checkpoint {path}: {exc}") from exc
    if data.get("version") != CHECKPOINT_VERSION or data.get("config") != config.digest():
        raise CheckpointError(f"checkpoint {path} was written for a different search configuration")
    if _state_digest(data["catalog"]) != data.get("digest"):
        raise CheckpointError(f"checkpoint {path} failed its digest check")
    return data["cursor"], Catalog.from_state(data["catalog"])


def _save_checkpoint(path: Path, config: SearchConfig, cursor: int, cat: Catalog) -> None:
    state = cat.to_state()
    _write_atomic(path, {
        "version": CHECKPOINT_VERSION,
        "config": config.digest(),
        "cursor": cursor,
        "catalog": state,
        "digest": _state_digest(state),
    })


# -- driver ----------------------------------------------------------------

def enumerate_candidates(config: SearchConfig, *, _stop_after: int | None = None) -> Catalog:
    """Run (or resume) the seeded search described by ``config``.

    ``_stop_after`` simulates a kill after that many tasks have completed
    in this invocation; it is a test hook.
    """
    tasks = _tasks(config)
    cursor, cat = 0, Catalog()
    ckpt = Path(config.checkpoint) if config.checkpoint else None
    if ckpt is not None and ckpt.exists():
        cursor, cat = load_checkpoint(ckpt, config)
        log.info("resuming at task %d/%d", cursor, len(tasks))
    pending = [(config.strategy, config.n, t) for t in tasks[cursor:]]
    since_write = 0
    done_here = 0

    if config.threads > 1 and len(pending) > 1:
        pool = ProcessPoolExecutor(max_workers=config.threads)
        results = pool.map(_run_task, pending, chunksize=1)
    else:
        pool = None
        results = map(_run_task, pending)
    try:
        for state in results:
            part = Catalog.from_state(state)
            cat.merge(part)
            cursor += 1
            done_here += 1
            since_write += part.counters["examined"]
            if ckpt is not None and (since_write >= config.checkpoint_every or cursor == len(tasks)):
                _save_checkpoint(ckpt, config, cursor, cat)
                since_write = 0
            if _stop_after is not None and done_here >= _stop_after and cursor < len(tasks):
                if ckpt is not None:
                    _save_checkpoint(ckpt, config, cursor, cat)
                raise SearchInterrupted(f"stopped after {done_here} tasks")
    finally:
        if pool is not None:
            pool.shutdown(cancel_futures=True)
    if ckpt is not None and cursor == len(tasks) and not pending:
        _save_checkpoint(ckpt, config, cursor, cat)
    return cat


def enumerate_by_layers(config: SearchConfig) -> Catalog:
    return enumerate_candidates(dataclasses.replace(config, strategy="layered"))


def resume(checkpoint: str | Path, config: SearchConfig) -> Catalog:
    if not Path(checkpoint).exists():
        raise CheckpointError(f"no checkpoint at {checkpoint}")
    return enumerate_candidates(dataclasses.replace(config, checkpoint=str(checkpoint)))


# -- independent checks -----------------------------------------------------

def brute_force_candidates(n: int, min_diameter: int = 3) -> dict[str, Graph]:
    """All connected bipartite candidates on ``n`` vertices, by exhaustion.

    Every bipartite graph is isomorphic to one whose colour classes are
    ``0..a-1`` and ``a..n-1`` with ``a <= n/2``, so enumerating the
    cross edges for each ``a`` covers all isomorphism classes. Keys are
    canonical-form hex strings.
    """
    found: dict[str, Graph] = {}
    for a in range(1, n // 2 + 1):
        cross = [(i, j) for i in range(a) for j in range(a, n)]
        for mask in range(1 << len(cross)):
            adj = [0] * n
            for bit, (i, j) in enumerate(cross):
                if mask >> bit & 1:
                    adj[i] |= 1 << j
                    adj[j] |= 1 << i
            if not all(adj):
                continue
            g = Graph.trusted(n, tuple(adj))
            if not g.is_connected() or g.diameter() < min_diameter:
                continue
            if is_candidate(g).candidate:
                found.setdefault(canonical_form(g).key.hex(), g)
    return found


def seed_free_candidates(n: int) -> dict[str, Graph]:
    """Bipartite candidates with diameter >= 3, found without the seeds.

    The graph is grown in BFS layers from an end of a diametral path. In a
    candidate every vertex two or more layers down has at least two
    neighbours in the layer above (its pair with a grandparent needs two
    common neighbours), and a vertex sharing exactly one neighbour with a
    vertex two layers up is ruled out at once. Vertices of a layer are
    interchangeable when it is built, so their up-neighbourhoods are taken
    as a multiset. Used as an oracle for the seeded search.
    """
    found: dict[str, Graph] = {}
    for depth in range(3, n):
        for rest in _compositions(n - 1, depth, [2] + [1] * (depth - 1)):
            sizes = (1,) + tuple(rest)
            starts = [sum(sizes[:i]) for i in range(len(sizes))]
            _grow_layers(n, sizes, starts, 1, [0] * n, found)
    return found


def _grow_layers(n, sizes, starts, layer, adj, found) -> None:
    if layer == len(sizes):
        g = Graph.trusted(n, tuple(adj))
        if is_candidate(g).candidate:
            found.setdefault(canonical_form(g).key.hex(), g)
        return
    above = range(starts[layer - 1], starts[layer - 1] + sizes[layer - 1])
    grand = range(starts[layer - 2], starts[layer - 2] + sizes[layer - 2]) if layer >= 2 else range(0)
    need = 1 if layer == 1 else 2
    codes = []
    for r in range(need, len(above) + 1):
        for sub in itertools.combinations(above, r):
            code = sum(1 << v for v in sub)
            if all((adj[p] & code).bit_count() != 1 for p in grand):
                codes.append(code)
    base = starts[layer]
    for combo in itertools.combinations_with_replacement(codes, sizes[layer]):
        new = list(adj)
        for j, code in enumerate(combo):
            new[base + j] = code
            for u in bits(code):
                new[u] |= 1 << (base + j)
        _grow_layers(n, sizes, starts, layer + 1, new, found)


def contains_seed(g: Graph) -> SeedKind | None:
    """Return the kind of a seed found as an induced subgraph, if any."""
    targets = {}
    for seed in minimal_seeds():
        for opt in [()] + [(e,) for e in seed.optional_edges]:
            targets[canonical_form(seed.graph(opt)).key] = seed.kind
    for sub in itertools.combinations(range(g.n), 8):
        h = g.induced(sub)
        if h.num_edges not in (11, 12, 13):
            continue
        kind = targets.get(canonical_form(h).key)
        if kind is not None:
            return kind
    return None
