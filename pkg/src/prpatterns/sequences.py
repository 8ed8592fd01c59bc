"""Finite sums, sum ratios and product sums of short sequences.

These are desk-scale versions of the configurations in the ratio/sum
theorem: for a sequence x_1 < x_2 < ... the sets FS(x), the ratios
sum_G / sum_F over index blocks F < G, and the product sums
sum_{l in F} prod_{i=k..l} y_i with k <= min F.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import Iterator, NamedTuple, Sequence

from .colourings import Colouring

Block = tuple[int, ...]  # 1-based indices, ascending


class ChainError(ValueError):
    """A chain whose quotients are not all integers."""

    def __init__(self, i: int, j: int, zi: int, zj: int):
        self.pair = (i, j)
        super().__init__(f"z_{j}/z_{i} = {zj}/{zi} is not an integer")


def _blocks(n: int) -> Iterator[Block]:
    for k in range(1, n + 1):
        for combo in combinations(range(1, n + 1), k):
            yield combo


def _sum(xs: Sequence[int], block: Block) -> int:
    return sum(xs[i - 1] for i in block)


def fs_set(xs: Sequence[int]) -> set[int]:
    """Sums over every nonempty set of indices."""
    if not xs:
        raise ValueError("fs_set needs a nonempty sequence")
    sums = {0}
    for x in xs:
        sums |= {s + x for s in sums}
    sums.discard(0)
    return sums


class RatioSet(NamedTuple):
    ratios: set[tuple[Block, Block, int]]
    violations: list[tuple[Block, Block]]


def ratio_set(xs: Sequence[int]) -> RatioSet:
    """All (F, G, sum_G / sum_F) with max F < min G; non-integral pairs go to ``violations``."""
    ratios: set[tuple[Block, Block, int]] = set()
    violations: list[tuple[Block, Block]] = []
    n = len(xs)
    for F in _blocks(n):
        for G in _blocks(n):
            if F[-1] >= G[0]:
                continue
            q, r = divmod(_sum(xs, G), _sum(xs, F))
            if r:
                violations.append((F, G))
            else:
                ratios.add((F, G, q))
    return RatioSet(ratios, violations)


def product_sum_set(ys: Sequence[int]) -> set[int]:
    out = set()
    n = len(ys)
    for F in _blocks(n):
        for k in range(1, F[0] + 1):
            total = 0
            for l in F:
                prod = 1
                for i in range(k, l + 1):
                    prod *= ys[i - 1]
                total += prod
            out.add(total)
    return out


@dataclass(frozen=True)
class DerivedSequences:
    xs: tuple[int, ...]
    ys: tuple[int, ...]


def derive_sequences(zs: Sequence[int]) -> DerivedSequences:
    """x_n = z_{n+1}/z_1 and y_n = z_{n+1}/z_n for a divisibility chain z."""
    if len(zs) < 2:
        raise ValueError("a chain needs at least two entries")
    if any(z < 1 for z in zs):
        raise ValueError("chain entries must be positive")
    xs, ys = [], []
    for n in range(1, len(zs)):
        prev, nxt = zs[n - 1], zs[n]
        if nxt % prev:
            raise ChainError(n, n + 1, prev, nxt)
        if nxt % zs[0]:
            raise ChainError(1, n + 1, zs[0], nxt)
        xs.append(nxt // zs[0])
        ys.append(nxt // prev)
    return DerivedSequences(tuple(xs), tuple(ys))


def chain_product_sums(zs: Sequence[int]) -> set[Fraction]:
    """{(sum_{l in F} z_{l+1}) / z_k : k <= min F}, the chain-side form of product sums."""
    n = len(zs) - 1
    return {Fraction(sum(zs[l] for l in F), zs[k - 1]) for F in _blocks(n) for k in range(1, F[0] + 1)}


# -- search ------------------------------------------------------------------

def _colour_or_none(colouring: Colouring, v: int) -> int | None:
    try:
        return colouring.colour(v)
    except IndexError:
        return None


def fs_ratio_search(colouring: Colouring, L: int, bound: int) -> list[int] | None:
    """Least (lexicographic) x_1 < ... < x_L <= bound, x_1 >= 2, with every
    finite sum and every block ratio integral and of one colour.

    Integrality is built in: x_j runs over multiples of the lcm of all sums
    of earlier terms, which makes every sum_G / sum_F with F < G integral.
    """
    if L < 1:
        raise ValueError("L must be >= 1")

    def extend(xs: list[int], sums: set[int], colour: int | None) -> list[int] | None:
        if len(xs) == L:
            return xs
        step = lcm(*sums) if sums else 1
        start = (xs[-1] // step + 1) * step if xs else 2
        for x in range(start, bound + 1, step):
            new = {x} | {s + x for s in sums}
            # ratios with G ending at x: G = G' + {x}, F before G'
            values = set(new)
            if xs:
                cand = xs + [x]
                values |= {q for F, G, q in ratio_set(cand).ratios if G[-1] == len(cand)}
            c = colour
            ok = True
            for v in sorted(values):
                cv = _colour_or_none(colouring, v)
                if cv is None or (c is not None and cv != c):
                    ok = False
                    break
                c = cv
            if ok:
                found = extend(xs + [x], sums | new, c)
                if found is not None:
                    return found
        return None

    return extend([], set(), None)


__all__ = [
    "ChainError", "DerivedSequences", "RatioSet", "chain_product_sums", "derive_sequences",
    "fs_ratio_search", "fs_set", "product_sum_set", "ratio_set",
]
