"""Canonical labeling by colour refinement and individualisation.

Works on a square matrix of small non-negative integers (0 = no relation),
so the same code labels undirected graphs (symmetric 0/1) and oriented
graphs (1 = arc out, 2 = arc in). The search tree is pruned with twin
transpositions and with automorphisms discovered at equal leaves; both
are sound because refinement commutes with relabeling.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .graph import Graph, emit_graph6

Matrix = Sequence[Sequence[int]]


@dataclass(frozen=True)
class CanonicalForm:
    key: bytes
    relabeling: tuple[int, ...]  # input vertex -> canonical position


def _refine(cells: list[list[int]], mat: Matrix) -> list[list[int]]:
    cells = [list(c) for c in cells]
    stable = False
    while not stable:
        stable = True
        for splitter in list(cells):
            new_cells: list[list[int]] = []
            changed = False
            for cell in cells:
                if len(cell) == 1:
                    new_cells.append(cell)
                    continue
                groups: dict[tuple, list[int]] = {}
                for v in cell:
                    row = mat[v]
                    counts: dict[int, int] = {}
                    for w in splitter:
                        x = row[w]
                        if x:
                            counts[x] = counts.get(x, 0) + 1
                    groups.setdefault(tuple(sorted(counts.items())), []).append(v)
                if len(groups) > 1:
                    changed = True
                    new_cells.extend(groups[sig] for sig in sorted(groups))
                else:
                    new_cells.append(cell)
            cells = new_cells
            if changed:
                stable = False
                break
    return cells


def _twin_generators(n: int, mat: Matrix) -> list[tuple[int, ...]]:
    gens = []
    for u in range(n):
        for w in range(u + 1, n):
            if mat[u][w] != mat[w][u]:
                continue
            if all(
                mat[u][x] == mat[w][x] and mat[x][u] == mat[x][w]
                for x in range(n)
                if x != u and x != w
            ):
                perm = list(range(n))
                perm[u], perm[w] = w, u
                gens.append(tuple(perm))
    return gens


def _orbit_roots(vertices: list[int], gens: list[tuple[int, ...]]) -> dict[int, int]:
    parent = {v: v for v in vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    changed = True
    while changed:
        changed = False
        for g in gens:
            for v in vertices:
                w = g[v]
                if w in parent:
                    rv, rw = find(v), find(w)
                    if rv != rw:
                        parent[max(rv, rw)] = min(rv, rw)
                        changed = True
    return {v: find(v) for v in vertices}


def canonical_labeling(
    mat: Matrix, colors: Sequence[int] | None = None
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Return ``(certificate, relabeling)`` for a relation matrix.

    ``relabeling[v]`` is the canonical position of vertex ``v``; the
    certificate is the row-major relation matrix in canonical order and
    is equal for two inputs exactly when they are isomorphic (respecting
    the optional vertex colours).
    """
    n = len(mat)
    if n == 0:
        return (), ()
    if colors is None:
        cells = [list(range(n))]
    else:
        by_color: dict[int, list[int]] = {}
        for v, c in enumerate(colors):
            by_color.setdefault(c, []).append(v)
        cells = [by_color[c] for c in sorted(by_color)]
    autos = _twin_generators(n, mat)
    if colors is not None:
        autos = [g for g in autos if all(colors[g[v]] == colors[v] for v in range(n))]

    best_cert: tuple[int, ...] | None = None
    best_order: list[int] | None = None

    def certificate(order):
        return tuple(mat[u][w] for u in order for w in order)

    def search(cells, path):
        nonlocal best_cert, best_order
        cells = _refine(cells, mat)
        target = None
        for i, cell in enumerate(cells):
            if len(cell) > 1 and (target is None or len(cell) < len(cells[target])):
                target = i
        if target is None:
            order = [c[0] for c in cells]
            cert = certificate(order)
            if best_cert is None or cert > best_cert:
                best_cert, best_order = cert, order
            elif cert == best_cert:
                # best_order[i] and order[i] occupy the same canonical slot
                perm = [0] * n
                for a, b in zip(best_order, order):
                    perm[a] = b
                autos.append(tuple(perm))
            return
        cell = cells[target]
        explored: list[int] = []
        for v in sorted(cell):
            fixing = [g for g in autos if all(g[p] == p for p in path)]
            if explored and fixing:
                roots = _orbit_roots(cell, fixing)
                if any(roots[v] == roots[u] for u in explored):
                    continue
            explored.append(v)
            rest = [w for w in cell if w != v]
            search(cells[:target] + [[v], rest] + cells[target + 1:], path + [v])

    search(cells, [])
    relabeling = [0] * n
    for pos, v in enumerate(best_order):
        relabeling[v] = pos
    return best_cert, tuple(relabeling)


def _adjacency_matrix(g: Graph) -> list[list[int]]:
    return [[(g.adj[v] >> w) & 1 for w in range(g.n)] for v in range(g.n)]


def canonical_form(g: Graph) -> CanonicalForm:
    _, relabeling = canonical_labeling(_adjacency_matrix(g))
    return CanonicalForm(emit_graph6(g.relabel(relabeling)).encode("ascii"), relabeling)


def canonical_graph(g: Graph) -> Graph:
    return g.relabel(canonical_form(g).relabeling)


def is_isomorphic(g1: Graph, g2: Graph) -> bool:
    if g1.n != g2.n or g1.num_edges != g2.num_edges:
        return False
    if sorted(g1.degrees()) != sorted(g2.degrees()):
        return False
    return canonical_form(g1).key == canonical_form(g2).key


def brute_force_key(g: Graph) -> bytes:
    """Maximum adjacency certificate over all n! relabelings (small n only)."""
    if g.n > 9:
        raise ValueError("brute-force canonical key is limited to n <= 9")
    mat = _adjacency_matrix(g)
    best = max(
        tuple(mat[u][w] for u in order for w in order)
        for order in itertools.permutations(range(g.n))
    )
    return bytes(best)
