"""Backtracking search for colourings of [1..N] with no monochromatic tuple.

Only tuples whose values all lie in [1..N] constrain the search, so a
witness says nothing about values beyond N.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .colourings import Explicit
from .pattern import Pattern
from .search import _eval_arrays

DEFAULT_BUDGET = 10_000_000


@dataclass(frozen=True)
class Witness:
    colouring: Explicit
    nodes: int


@dataclass(frozen=True)
class Unsat:
    nodes: int


@dataclass(frozen=True)
class BudgetExhausted:
    nodes: int


WitnessResult = Witness | Unsat | BudgetExhausted


def constraint_sets(pattern: Pattern, N: int) -> list[frozenset[int]]:
    """Distinct value sets of solutions with every value in [1..N], sorted."""
    r = np.arange(1, N + 1, dtype=np.int64)
    xs, ys = (a.ravel() for a in np.meshgrid(r, r, indexing="ij"))
    ok = np.ones(xs.shape, dtype=bool)
    cols = []
    for piece in pattern.pieces:
        vals, good = _eval_arrays(piece, xs, ys)
        ok &= good & (vals >= 1) & (vals <= N)
        cols.append(vals)
    rows = np.stack([c[ok] for c in cols], axis=1) if cols else np.empty((0, 0), dtype=np.int64)
    edges = {frozenset(row) for row in rows.tolist()}
    return sorted(edges, key=lambda e: (max(e), sorted(e)))


def _edges_by_max(edges: list[frozenset[int]], N: int) -> list[list[tuple[int, ...]]]:
    """For each value v, the other members of every constraint whose largest value is v."""
    out: list[list[tuple[int, ...]]] = [[] for _ in range(N + 1)]
    for e in edges:
        top = max(e)
        out[top].append(tuple(sorted(e - {top})))
    return out


def has_monochromatic(table: list[int] | tuple[int, ...], edges: list[frozenset[int]]) -> bool:
    return any(len({table[v - 1] for v in e}) == 1 for e in edges)


def search_witness(pattern: Pattern, r: int, N: int, budget: int = DEFAULT_BUDGET) -> WitnessResult:
    """Depth-first colouring of 1, 2, ..., N avoiding every monochromatic tuple.

    Colour 1 gets colour 0 and a new colour is only opened as the least
    unused one, so the first witness found is the lexicographically least
    up to renaming colours. One node is one tentative assignment.
    """
    if r < 2:
        raise ValueError("r must be >= 2")
    if N < 1:
        raise ValueError("N must be >= 1")
    edges = constraint_sets(pattern, N)
    by_max = _edges_by_max(edges, N)
    colour = [-1] * (N + 1)
    # next colour to try at each depth, and highest colour used below it
    next_try = [0] * (N + 2)
    used = [0] * (N + 2)  # used[v] = number of colours used on 1..v-1
    v, nodes = 1, 0
    next_try[1] = 0
    while True:
        if v > N:
            table = tuple(colour[1:])
            return Witness(Explicit(N, table, r), nodes)
        if v == 0:
            return Unsat(nodes)
        limit = min(r, used[v] + 1) if v > 1 else 1
        placed = False
        while next_try[v] < limit:
            c = next_try[v]
            next_try[v] += 1
            nodes += 1
            if nodes > budget:
                return BudgetExhausted(nodes - 1)
            if any(all(colour[u] == c for u in rest) for rest in by_max[v]):
                continue
            colour[v] = c
            used[v + 1] = max(used[v], c + 1)
            next_try[v + 1] = 0
            placed = True
            break
        if placed:
            v += 1
        else:
            colour[v] = -1
            v -= 1


__all__ = [
    "BudgetExhausted", "DEFAULT_BUDGET", "Unsat", "Witness", "WitnessResult", "constraint_sets",
    "has_monochromatic", "search_witness",
]
