"""Command-line entry point: ``mtlz <subcommand> ...``.

Every command prints one JSON document (catalogs are JSON lines) carrying a
``manifest`` block. Exit status is 0 unless a stage raised an error; physics
outcomes such as a trivial-only magnitude search are ordinary data.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
import time
from pathlib import Path

from . import __version__
from .families import build, parse_family
from .gamma import GammaConfig, GammaStatus, build_gamma_system, solve_gamma
from .graph import Graph, GraphError, parse_graph6
from .orientation import branch_search, r_assignment_from_list, r_assignment_to_list
from .rules import is_candidate
from .search import Catalog, SearchConfig, SearchError, enumerate_candidates
from .verifier import MTLZData, VerifierError, check_cycle_property, check_multipath_property

log = logging.getLogger("mtlzgraph")

# Reference counts per vertex number: (1221-free, with 1221).
REFERENCE_COUNTS = {8: (1, 1), 9: (0, 2), 10: (1, 7), 11: (0, 7), 12: (1, 30), 13: (0, 46)}
REFERENCE_N10_EDGES = (17, 18, 18, 18, 18, 18, 19, 20)

EXIT_OK = 0
EXIT_STAGE_ERROR = 1
EXIT_USAGE = 2


class StageError(Exception):
    def __init__(self, stage: str, message: str):
        super().__init__(f"{stage}: {message}")
        self.stage = stage
        self.message = message


def _digest(data: str | bytes) -> str:
    if isinstance(data, str):
        data = data.encode()
    return hashlib.sha256(data).hexdigest()


class Manifest:
    def __init__(self, args: argparse.Namespace, config: dict, seeds: dict | None = None):
        self.start = time.perf_counter()
        self.args = args
        self.config = config
        self.seeds = seeds or {}
        self.inputs: dict[str, str] = {}

    def add_input(self, name: str, data: str | bytes) -> None:
        self.inputs[name] = _digest(data)

    def to_dict(self) -> dict:
        wall = None if self.args.stable else round(time.perf_counter() - self.start, 6)
        return {
            "tool": "mtlzgraph",
            "version": __version__,
            "command": self.args.command,
            "config": self.config,
            "seeds": self.seeds,
            "wall_time_s": wall,
            "inputs": self.inputs,
        }


def _threads(args) -> int:
    if getattr(args, "threads", None):
        return args.threads
    env = os.environ.get("MTLZ_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise StageError("config", f"MTLZ_THREADS must be an integer, got {env!r}") from None
    return os.cpu_count() or 1


def _graph(text: str, stage: str = "input") -> Graph:
    try:
        return parse_graph6(text.strip())
    except GraphError as exc:
        raise StageError(stage, str(exc)) from exc


def _emit(doc: dict, out: str | None = None) -> None:
    text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _graph_summary(g: Graph) -> dict:
    connected = g.is_connected()
    return {
        "graph6": g.to_graph6(),
        "n": g.n,
        "edges": g.num_edges,
        "degrees": sorted(g.degrees(), reverse=True),
        "connected": connected,
        "bipartite": g.is_bipartite(),
        "diameter": g.diameter() if connected and g.n else None,
    }


# -- subcommands -------------------------------------------------------------

def cmd_family(args) -> dict:
    text = args.name
    if args.params:
        text += ":" + ",".join(args.params)
    man = Manifest(args, {"family": text})
    try:
        g = build(parse_family(text))
    except (GraphError, TypeError, ValueError) as exc:
        raise StageError("family", str(exc)) from exc
    return {"graph": _graph_summary(g), "manifest": man.to_dict()}


def _orientation_doc(g: Graph) -> dict:
    res = branch_search(g)
    return {
        "orientations": [c.to_dict() for c in res.classes],
        "raw_count": len(res.raw),
        "pruned_counts": res.stats.to_dict(),
    }


def cmd_check(args) -> dict:
    man = Manifest(args, {})
    man.add_input("graph6", args.graph6)
    g = _graph(args.graph6)
    return {"graph": _graph_summary(g), "rules": is_candidate(g).to_dict(), "manifest": man.to_dict()}


def cmd_enumerate(args) -> int:
    threads = _threads(args)
    cfg_echo = {"n": args.n, "strategy": args.strategy, "seeds": args.seeds, "threads": threads}
    man = Manifest(args, cfg_echo)
    try:
        config = SearchConfig(
            n=args.n, strategy=args.strategy, seeds=args.seeds, threads=threads,
            checkpoint=args.checkpoint,
        )
        cat = enumerate_candidates(config)
    except SearchError as exc:
        raise StageError("enumerate", str(exc)) from exc
    text = cat.to_jsonl({"manifest": man.to_dict()})
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_orient(args) -> dict:
    man = Manifest(args, {})
    man.add_input("graph6", args.graph6)
    g = _graph(args.graph6)
    if not is_candidate(g).candidate:
        raise StageError("orient", "input is not a candidate graph")
    return {**_orientation_doc(g), "manifest": man.to_dict()}


def _gamma_cfg(args) -> GammaConfig:
    return GammaConfig(restarts=args.restarts, tol_resid=args.tol, eps_trivial=args.eps_trivial, seed=args.seed)


def _solve_all(g: Graph, cfg: GammaConfig) -> list[dict]:
    out = []
    res = branch_search(g)
    for i, cls in enumerate(res.classes):
        for j, sol in enumerate(cls.r_solutions):
            gs = solve_gamma(build_gamma_system(g, sol), cfg)
            out.append({"orientation": i, "r_solution": j, "gamma": gs.to_dict()})
    return out


def cmd_gamma(args) -> dict:
    cfg = _gamma_cfg(args)
    man = Manifest(args, {"restarts": cfg.restarts, "tol": cfg.tol_resid, "eps_trivial": cfg.eps_trivial}, {"gamma": cfg.seed})
    man.add_input("graph6", args.graph6)
    g = _graph(args.graph6)
    if args.auto:
        return {"results": _solve_all(g, cfg), "manifest": man.to_dict()}
    if not args.r:
        raise StageError("gamma", "give --r FILE or --auto")
    try:
        text = Path(args.r).read_text()
        man.add_input("r", text)
        doc = json.loads(text)
        rows = doc["r"] if isinstance(doc, dict) else doc
        r = r_assignment_from_list(rows)
        gs = solve_gamma(build_gamma_system(g, r), cfg)
    except (OSError, ValueError, KeyError, GraphError) as exc:
        raise StageError("gamma", str(exc)) from exc
    return {"gamma": gs.to_dict(), "manifest": man.to_dict()}


def cmd_verify(args) -> dict:
    man = Manifest(args, {"tol": args.tol})
    try:
        text = Path(args.file).read_text()
        man.add_input("data", text)
        data = MTLZData.from_json(json.loads(text))
        cyc = check_cycle_property(data, args.tol)
        mp = check_multipath_property(data, args.tol) if data.gamma else None
    except (OSError, ValueError, KeyError, GraphError, VerifierError) as exc:
        raise StageError("verify", str(exc)) from exc
    return {
        "cycle_property": cyc.to_dict(),
        "multipath_property": None if mp is None else mp.to_dict(),
        "manifest": man.to_dict(),
    }


def cmd_pipeline(args) -> dict:
    cfg = _gamma_cfg(args)
    man = Manifest(args, {"restarts": cfg.restarts, "tol": cfg.tol_resid, "eps_trivial": cfg.eps_trivial}, {"gamma": cfg.seed})
    man.add_input("graph6", args.graph6)
    g = _graph(args.graph6, "rules")
    doc: dict = {"graph": _graph_summary(g)}
    report = is_candidate(g)
    doc["rules"] = report.to_dict()
    if not report.candidate:
        doc["stopped_after"] = "rules"
    else:
        doc["orientation"] = _orientation_doc(g)
        doc["gamma"] = _solve_all(g, cfg)
        statuses = {item["gamma"]["status"] for item in doc["gamma"]}
        doc["nontrivial_found"] = GammaStatus.NONTRIVIAL.value in statuses
    doc["manifest"] = man.to_dict()
    return doc


def report_tables(paths: list[str]) -> dict:
    if not paths:
        raise StageError("report", "no catalog files given")
    by_n: dict[int, Catalog] = {}
    for p in paths:
        try:
            cat, _ = Catalog.from_jsonl(Path(p).read_text())
        except (OSError, ValueError, KeyError) as exc:
            raise StageError("report", f"{p}: {exc}") from exc
        for key, entry in cat.entries.items():
            by_n.setdefault(entry.n, Catalog()).entries[key] = entry
    counts = []
    notes = []
    for n in sorted(by_n):
        free, with_ = by_n[n].counts()
        counts.append({"n": n, "free1221": free, "with1221": with_})
        ref = REFERENCE_COUNTS.get(n)
        if ref is not None and ref != (free, with_):
            notes.append(f"n={n}: found {(free, with_)}, reference {ref}")
    n10 = []
    if 10 in by_n:
        for e in sorted(by_n[10].entries.values(), key=lambda e: (sum(e.degrees), e.degrees, e.key)):
            n10.append({"edges": sum(e.degrees) // 2, "degrees": list(e.degrees), "has_1221": e.has_1221})
        edges = tuple(sorted(row["edges"] for row in n10))
        if edges != REFERENCE_N10_EDGES:
            notes.append(f"n=10 edge counts {edges} differ from reference {REFERENCE_N10_EDGES}")
    return {"counts": counts, "n10": n10, "notes": notes}


def cmd_report(args) -> dict:
    man = Manifest(args, {"catalogs": list(args.catalogs)})
    for p in args.catalogs:
        try:
            man.add_input(p, Path(p).read_bytes())
        except OSError as exc:
            raise StageError("report", str(exc)) from exc
    return {**report_tables(args.catalogs), "manifest": man.to_dict()}


# -- parser ------------------------------------------------------------------

def _add_gamma_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--restarts", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--eps-trivial", type=float, default=1e-6)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mtlz", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"mtlzgraph {__version__}")
    parser.add_argument("--stable", action="store_true", help="omit wall time so output is byte-stable")
    parser.add_argument("-v", "--verbose", action="store_true")
    parser.add_argument("-o", "--output", help="write the JSON document here instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("family", help="build a named graph")
    p.add_argument("name")
    p.add_argument("params", nargs="*")
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("check", help="run the four rules on a graph")
    p.add_argument("graph6")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("enumerate", help="seeded exhaustive search")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--strategy", choices=("basic", "layered"), default="basic")
    p.add_argument("--seeds", choices=("both", "free", "with1221"), default="both")
    p.add_argument("--threads", type=int)
    p.add_argument("--out")
    p.add_argument("--checkpoint")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("orient", help="branch search over orientations")
    p.add_argument("graph6")
    p.set_defaults(func=cmd_orient)

    p = sub.add_parser("gamma", help="search for positive magnitudes")
    p.add_argument("graph6")
    p.add_argument("--r", help="JSON file with rows [a, c, b, d, value]")
    p.add_argument("--auto", action="store_true", help="take every r solution from the branch search")
    _add_gamma_flags(p)
    p.set_defaults(func=cmd_gamma)

    p = sub.add_parser("verify", help="check explicit forms and magnitudes")
    p.add_argument("file")
    p.add_argument("--tol", type=float, default=1e-12)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("pipeline", help="rules, orientations and magnitudes for one graph")
    p.add_argument("graph6")
    _add_gamma_flags(p)
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("report", help="tables from catalog files")
    p.add_argument("catalogs", nargs="*")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr)
    try:
        doc = args.func(args)
    except StageError as exc:
        json.dump({"error": {"stage": exc.stage, "message": exc.message}}, sys.stderr)
        sys.stderr.write("\n")
        return EXIT_STAGE_ERROR
    if isinstance(doc, dict):
        _emit(doc, args.output)
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
