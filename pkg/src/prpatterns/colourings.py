"""Colourings of the positive integers used as blocking certificates.

Structured colourings are total on N; explicit ones cover [1..N] only. Every
colouring maps to dense indices ``0..count-1`` and has a vectorized form
(``colours``) used by the search; out-of-range explicit lookups give -1 there.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .arith import _require_prime, lcm, smod, vp


class FormatError(ValueError):
    def __init__(self, message: str, line: int):
        self.line = line
        super().__init__(f"line {line}: {message}")


class ColouringRangeError(IndexError):
    """An explicit colouring was asked about a value outside [1..N]."""


class SpecError(ValueError):
    """Malformed colouring spec string."""


class Colouring:
    count: int

    def colour(self, x: int) -> int:
        raise NotImplementedError

    def colours(self, xs: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def residue_modulus(self) -> int | None:
        """M such that the colour of x depends only on x mod M, if there is one."""
        return None

    def residue_part(self) -> "Colouring | None":
        """A coarsening that factors through x mod M (mono here implies mono there)."""
        return self if self.residue_modulus() is not None else None

    def factor_state(self, values: np.ndarray, g: int) -> tuple[np.ndarray, int] | None:
        """States ``S`` (with range) of positive integers such that the colour of
        ``A*B/g`` is a function of ``S(A), S(B)`` whenever g divides A*B.

        Only multiplicative colourings have one; others return None.
        """
        return None

    def spec(self) -> str:
        raise NotImplementedError

    def __str__(self):
        return self.spec()


def _check_positive(x: int) -> None:
    if x < 1:
        raise ValueError(f"colourings are defined on positive integers, got {x}")


def _bit_lengths(xs: np.ndarray) -> np.ndarray:
    if xs.dtype != object and (xs.size == 0 or int(xs.max()) < 1 << 52):
        # exact: integers below 2**52 are represented exactly as doubles
        return np.frexp(xs.astype(np.float64))[1].astype(np.int64)
    return np.array([int(v).bit_length() for v in xs.ravel()], dtype=np.int64).reshape(xs.shape)


@dataclass(frozen=True)
class ResidueMod(Colouring):
    M: int

    def __post_init__(self):
        if self.M < 2:
            raise ValueError("ResidueMod needs M >= 2")

    @property
    def count(self) -> int:
        return self.M

    def colour(self, x: int) -> int:
        _check_positive(x)
        return x % self.M

    def colours(self, xs):
        return (xs % self.M).astype(np.int64)

    def residue_modulus(self):
        return self.M

    def factor_state(self, values, g):
        m = g * self.M
        return (values % m).astype(np.int64), m

    def spec(self):
        return f"mod:{self.M}"


@dataclass(frozen=True)
class SmodVal(Colouring):
    """Colour ``(smod(x+shift, p), vp(x+shift, p) mod K)``, indexed ``(smod-1)*K + v``.

    With ``shift = s`` the colour reads the p-adic digits of x + s, which is
    where the obstruction sits for solutions in the residue class -s mod p.
    The value x = -s (where x + s = 0) gets colour 0.
    """

    p: int
    K: int = 1
    shift: int = 0

    def __post_init__(self):
        _require_prime(self.p)
        if self.K < 1:
            raise ValueError("SmodVal needs K >= 1")

    @property
    def count(self) -> int:
        return (self.p - 1) * self.K

    def colour(self, x: int) -> int:
        _check_positive(x)
        z = x + self.shift
        if z == 0:
            return 0
        return (smod(z, self.p) - 1) * self.K + vp(z, self.p) % self.K

    def colours(self, xs):
        z = xs + self.shift if self.shift else xs
        zero = z == 0
        out = self._digit_colours(np.where(zero, 1, z))
        return np.where(zero, 0, out) if self.shift else out

    def _digit_colours(self, zs):
        p = self.p
        flat = np.array(zs, copy=True).ravel()
        v = np.zeros(flat.shape, dtype=np.int64)
        idx = np.nonzero(flat % p == 0)[0]
        while idx.size:
            flat[idx] //= p
            v[idx] += 1
            idx = idx[flat[idx] % p == 0]
        return ((flat % p - 1) * self.K + v % self.K).astype(np.int64).reshape(np.shape(zs))

    def factor_state(self, values, g):
        # smod and vp are multiplicative/additive; A mod g decides divisibility
        if self.shift:
            return None
        p, K = self.p, self.K
        flat = np.array(values, copy=True).ravel()
        v = np.zeros(flat.shape, dtype=np.int64)
        idx = np.nonzero(flat % p == 0)[0]
        while idx.size:
            flat[idx] //= p
            v[idx] += 1
            idx = idx[flat[idx] % p == 0]
        state = ((flat % p) * K + v % K) * g + np.ravel(values) % g
        return state.astype(np.int64).reshape(np.shape(values)), p * K * g

    def spec(self):
        tail = f":{self.shift}" if self.shift else ""
        return f"smodval:{self.p}:{self.K}{tail}"


@dataclass(frozen=True)
class BinLen(Colouring):
    """Colour ``(L(x) mod K, first s binary digits of x)``.

    L(x) is the binary length, 2^(L-1) <= x < 2^L. Digits past the end of a
    short number count as 0.
    """

    K: int
    s: int = 0

    def __post_init__(self):
        if self.K < 1 or self.s < 0:
            raise ValueError("BinLen needs K >= 1 and s >= 0")

    @property
    def count(self) -> int:
        return self.K << self.s

    def colour(self, x: int) -> int:
        _check_positive(x)
        L = x.bit_length()
        lead = x >> (L - self.s) if L >= self.s else x << (self.s - L)
        return (L % self.K << self.s) + (lead % (1 << self.s))

    def colours(self, xs):
        L = _bit_lengths(xs)
        s = self.s
        shift = L - s
        lead = np.where(shift >= 0, xs >> np.maximum(shift, 0), xs << np.maximum(-shift, 0))
        return ((L % self.K << s) + lead % (1 << s)).astype(np.int64)

    def spec(self):
        return f"binlen:{self.K}:{self.s}"


@dataclass(frozen=True)
class Product(Colouring):
    left: Colouring
    right: Colouring

    @property
    def count(self) -> int:
        return self.left.count * self.right.count

    def colour(self, x: int) -> int:
        return self.left.colour(x) * self.right.count + self.right.colour(x)

    def colours(self, xs):
        a, b = self.left.colours(xs), self.right.colours(xs)
        out = a * self.right.count + b
        return np.where((a < 0) | (b < 0), -1, out)

    def factor_state(self, values, g):
        left, right = self.left.factor_state(values, g), self.right.factor_state(values, g)
        if left is None or right is None:
            return None
        return left[0] * right[1] + right[0], left[1] * right[1]

    def residue_part(self):
        left, right = self.left.residue_part(), self.right.residue_part()
        if left is not None and right is not None:
            return Product(left, right)
        return left if left is not None else right

    def split(self, index: int) -> tuple[int, int]:
        return divmod(index, self.right.count)

    def residue_modulus(self):
        ml, mr = self.left.residue_modulus(), self.right.residue_modulus()
        return lcm(ml, mr) if ml and mr else None

    def spec(self):
        return f"prod:({self.left.spec()},{self.right.spec()})"


@dataclass(frozen=True, eq=False)
class Explicit(Colouring):
    N: int
    table: tuple[int, ...]
    r: int

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(int(c) for c in self.table))
        if len(self.table) != self.N:
            raise ValueError(f"table has {len(self.table)} entries, expected N={self.N}")
        if self.r < 1 or any(not 0 <= c < self.r for c in self.table):
            raise ValueError(f"colour indices must lie in [0, {self.r})")

    def __eq__(self, other):
        return isinstance(other, Explicit) and (self.N, self.r, self.table) == (other.N, other.r, other.table)

    def __hash__(self):
        return hash((self.N, self.r, self.table))

    @property
    def count(self) -> int:
        return self.r

    def colour(self, x: int) -> int:
        if not 1 <= x <= self.N:
            raise ColouringRangeError(f"{x} outside the explicit range [1, {self.N}]")
        return self.table[x - 1]

    @cached_property
    def _lookup(self) -> np.ndarray:
        return np.asarray(self.table + (-1,), dtype=np.int64)

    def colours(self, xs):
        arr = self._lookup
        inside = (xs >= 1) & (xs <= self.N)
        idx = np.where(inside, xs - 1, self.N).astype(np.int64)
        return arr[idx]

    def spec(self):
        return f"explicit:N={self.N}:r={self.r}"

    @classmethod
    def from_function(cls, colouring: Colouring, N: int) -> "Explicit":
        """Restriction of any total colouring to [1..N]."""
        return cls(N, tuple(colouring.colour(x) for x in range(1, N + 1)), colouring.count)


def colour_of(colouring: Colouring, x: int) -> int:
    return colouring.colour(x)


# -- files and specs -----------------------------------------------------------

def load_colouring(path: str | os.PathLike) -> Explicit:
    with open(path) as fh:
        lines = fh.read().splitlines()
    return parse_explicit(lines)


def parse_explicit(lines: Sequence[str]) -> Explicit:
    if not lines or not lines[0].strip():
        raise FormatError("missing header 'N r'", 1)
    header = lines[0].split()
    if len(header) != 2 or not all(h.isdigit() for h in header):
        raise FormatError(f"header must be 'N r', got {lines[0]!r}", 1)
    N, r = map(int, header)
    if r < 1:
        raise FormatError("colour count r must be at least 1", 1)
    table: list[int] = []
    for lineno, line in enumerate(lines[1:], start=2):
        for tok in line.split():
            try:
                value = int(tok)
            except ValueError:
                raise FormatError(f"not an integer: {tok!r}", lineno) from None
            if not 0 <= value < r:
                raise FormatError(f"colour {value} outside [0, {r})", lineno)
            if len(table) == N:
                raise FormatError(f"more than N={N} entries", lineno)
            table.append(value)
    if len(table) != N:
        raise FormatError(f"expected {N} entries, found {len(table)}", len(lines))
    return Explicit(N, tuple(table), r)


def save_colouring(colouring: Explicit, path: str | os.PathLike, width: int = 40) -> None:
    with open(path, "w") as fh:
        fh.write(format_explicit(colouring, width))


def format_explicit(colouring: Explicit, width: int = 40) -> str:
    rows = [f"{colouring.N} {colouring.r}"]
    t = colouring.table
    for i in range(0, len(t), width):
        rows.append(" ".join(map(str, t[i : i + width])))
    return "\n".join(rows) + "\n"


_SPEC_HEAD = re.compile(r"\s*(mod|smodval|binlen|prod|file):")


def parse_colouring_spec(spec: str) -> Colouring:
    """Parse ``mod:M``, ``smodval:p:K``, ``binlen:K:s``, ``prod:(A,B)`` or ``file:PATH``."""
    spec = spec.strip()
    m = _SPEC_HEAD.match(spec)
    if m is None:
        raise SpecError(f"unknown colouring spec {spec!r}")
    kind, body = m.group(1), spec[m.end():]
    if kind == "file":
        return load_colouring(body)
    if kind == "prod":
        if not (body.startswith("(") and body.endswith(")")):
            raise SpecError("prod needs prod:(spec,spec)")
        inner = body[1:-1]
        depth = 0
        for i, ch in enumerate(inner):
            depth += {"(": 1, ")": -1}.get(ch, 0)
            if ch == "," and depth == 0:
                return Product(parse_colouring_spec(inner[:i]), parse_colouring_spec(inner[i + 1:]))
        raise SpecError("prod needs two comma-separated specs")
    try:
        args = [int(a) for a in body.split(":")]
    except ValueError:
        raise SpecError(f"bad integer arguments in {spec!r}") from None
    try:
        if kind == "mod" and len(args) == 1:
            return ResidueMod(*args)
        if kind == "smodval" and len(args) in (1, 2, 3):
            return SmodVal(*args)
        if kind == "binlen" and len(args) in (1, 2):
            return BinLen(*args)
    except ValueError as exc:
        raise SpecError(str(exc)) from None
    raise SpecError(f"wrong number of arguments in {spec!r}")
