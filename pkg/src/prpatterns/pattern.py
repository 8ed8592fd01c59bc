"""Pattern data model: pieces, bilinear normal form, factoring and evaluation.

A bilinear piece ``q(ax+n)(by+m)`` is stored by its expanded coefficients
``c xy + d x + e y + f`` with ``(c, d, e) = (qab, qam, qbn)`` and ``f = de/c``.
The five-parameter form is redundant up to rescaling, so two pieces are
equal exactly when their coefficients are.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Union

from .arith import RationalLike, as_rational, lcm


class PatternError(ValueError):
    """A pattern or piece violates a structural constraint."""


class NotFactorableError(PatternError):
    """An expanded bilinear piece is not of the form q(ax+n)(by+m)."""


class NotSymmetricError(PatternError):
    """The x<->y swap is not defined for this pattern (it has a ratio piece)."""


@dataclass(frozen=True)
class Var:
    """The bare variable piece ``x`` or ``y``."""

    name: str

    def __post_init__(self):
        if self.name not in ("x", "y"):
            raise PatternError(f"unknown variable {self.name!r}")


X = Var("x")
Y = Var("y")


@dataclass(frozen=True)
class Linear:
    """``cx*x + cy*y`` with integer coefficients, not both zero."""

    cx: int
    cy: int

    def __post_init__(self):
        if not (isinstance(self.cx, int) and isinstance(self.cy, int)):
            raise PatternError("linear coefficients must be integers")
        if self.cx == 0 and self.cy == 0:
            raise PatternError("linear piece 0x + 0y")


@dataclass(frozen=True)
class Ratio:
    """``q * y / x``; defined only where x divides y and the value is an integer."""

    q: Fraction

    def __post_init__(self):
        object.__setattr__(self, "q", as_rational(self.q))
        if self.q <= 0:
            raise PatternError("ratio coefficient must be positive")


@dataclass(frozen=True)
class BilinearPiece:
    """``c xy + d x + e y + f`` with ``c > 0`` and ``f = de/c``."""

    c: Fraction
    d: Fraction
    e: Fraction

    def __post_init__(self):
        for name in ("c", "d", "e"):
            object.__setattr__(self, name, as_rational(getattr(self, name)))
        if self.c <= 0:
            raise NotFactorableError(f"xy coefficient must be positive (c > 0), got {self.c}")

    @property
    def f(self) -> Fraction:
        return self.d * self.e / self.c

    @property
    def coefficients(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return self.c, self.d, self.e, self.f

    @property
    def is_pure(self) -> bool:
        return self.d == 0 and self.e == 0

    @cached_property
    def integer_form(self) -> tuple[int, int, int, int, int]:
        """``(C, D, E, F, den)`` with value ``(C xy + D x + E y + F) / den``."""
        den = lcm(*(v.denominator for v in self.coefficients))
        C, D, E, F = (int(v * den) for v in self.coefficients)
        return C, D, E, F, den

    def value(self, x: int, y: int) -> Fraction:
        return self.c * x * y + self.d * x + self.e * y + self.f


Piece = Union[Var, Linear, Ratio, BilinearPiece]


@dataclass(frozen=True)
class FactoredPiece:
    """One representative ``q(ax+n)(by+m)`` of a bilinear piece; q = k/h."""

    q: Fraction
    a: int
    n: int
    b: int
    m: int

    @property
    def k(self) -> int:
        return self.q.numerator

    @property
    def h(self) -> int:
        return self.q.denominator


def _piece_key(piece: Piece):
    if isinstance(piece, Var):
        return (0 if piece.name == "x" else 1,)
    if isinstance(piece, Linear):
        return (2, piece.cx, piece.cy)
    if isinstance(piece, Ratio):
        return (3, piece.q)
    return (4, piece.c, piece.d, piece.e)


@dataclass(frozen=True)
class Pattern:
    """A deduplicated, canonically ordered list of pieces containing x and y.

    Pieces are sorted x, y, linear, ratio, bilinear; the source text is kept
    for reporting but does not take part in equality.
    """

    pieces: tuple[Piece, ...]
    source: str = field(default="", compare=False)

    def __post_init__(self):
        unique = sorted(set(self.pieces), key=_piece_key)
        if X not in unique or Y not in unique:
            raise PatternError("a pattern must contain both x and y")
        object.__setattr__(self, "pieces", tuple(unique))

    def __iter__(self):
        return iter(self.pieces)

    def __len__(self):
        return len(self.pieces)

    @property
    def bilinear(self) -> tuple[BilinearPiece, ...]:
        return tuple(p for p in self.pieces if isinstance(p, BilinearPiece))

    @property
    def linear(self) -> tuple[Linear, ...]:
        return tuple(p for p in self.pieces if isinstance(p, Linear))

    @property
    def ratios(self) -> tuple[Ratio, ...]:
        return tuple(p for p in self.pieces if isinstance(p, Ratio))

    @property
    def extra(self) -> tuple[Piece, ...]:
        """Every piece except the bare x and y."""
        return self.pieces[2:]

    def __str__(self):
        return render(self)


def make_pattern(*pieces: Piece, source: str = "") -> Pattern:
    """Pattern ``x, y, *pieces``."""
    return Pattern((X, Y) + tuple(pieces), source)


def to_bilinear(q: RationalLike, a: int, b: int, n: int, m: int) -> BilinearPiece:
    """Expand ``q(ax+n)(by+m)`` into ``(c, d, e) = (qab, qam, qbn)``."""
    q = as_rational(q)
    if q <= 0 or a <= 0 or b <= 0:
        raise PatternError("need q > 0 and a, b >= 1")
    return BilinearPiece(q * a * b, q * a * m, q * b * n)


def factor_bilinear(piece: BilinearPiece) -> FactoredPiece:
    """A representative ``q(ax+n)(by+m)`` expanding back to ``piece``.

    There is no preferred representative; this one takes ``a = b`` equal to
    the least common denominator of ``d/c`` and ``e/c``, which keeps the
    choice symmetric under x<->y.
    """
    rd, re = piece.d / piece.c, piece.e / piece.c
    a = b = lcm(rd.denominator, re.denominator)
    return FactoredPiece(q=piece.c / (a * b), a=a, n=int(re * a), b=b, m=int(rd * b))


def canonical_piece(piece: BilinearPiece) -> BilinearPiece:
    """The piece ``(x + e)(y + d)``, i.e. ``(1, d, e)``."""
    return BilinearPiece(Fraction(1), piece.d, piece.e)


def evaluate_piece(piece: Piece, x: int, y: int) -> int | None:
    """Value of ``piece`` at (x, y) when it is a positive integer, else None."""
    if isinstance(piece, Var):
        return x if piece.name == "x" else y
    if isinstance(piece, Linear):
        v = piece.cx * x + piece.cy * y
        return v if v > 0 else None
    if isinstance(piece, Ratio):
        if y % x:
            return None
        num = piece.q.numerator * (y // x)
        return num // piece.q.denominator if num % piece.q.denominator == 0 else None
    C, D, E, F, den = piece.integer_form
    num = C * x * y + D * x + E * y + F
    if num <= 0 or num % den:
        return None
    return num // den


def swap_piece(piece: Piece) -> Piece:
    if isinstance(piece, Var):
        return Y if piece.name == "x" else X
    if isinstance(piece, Linear):
        return Linear(piece.cy, piece.cx)
    if isinstance(piece, Ratio):
        raise NotSymmetricError("ratio pieces q*y/x are not symmetric in x and y")
    return BilinearPiece(piece.c, piece.e, piece.d)


def swap_xy(pattern: Pattern) -> Pattern:
    return Pattern(tuple(swap_piece(p) for p in pattern.pieces), pattern.source)


def scale_piece(piece: Piece, factor: Fraction) -> Piece:
    """Multiply a piece's value by ``factor`` (x and y count as linear)."""
    if isinstance(piece, Var):
        piece = Linear(1, 0) if piece.name == "x" else Linear(0, 1)
    if isinstance(piece, Linear):
        cx, cy = piece.cx * factor, piece.cy * factor
        if cx.denominator != 1 or cy.denominator != 1:
            raise PatternError(f"rescaling leaves a non-integral linear piece ({cx})x + ({cy})y")
        return linear_or_var(int(cx), int(cy))
    if isinstance(piece, Ratio):
        return Ratio(piece.q * factor)
    return BilinearPiece(piece.c * factor, piece.d * factor, piece.e * factor)


def linear_or_var(cx: int, cy: int) -> Piece:
    if (cx, cy) == (1, 0):
        return X
    if (cx, cy) == (0, 1):
        return Y
    return Linear(cx, cy)


# -- rendering ---------------------------------------------------------------

def _fmt(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _join_terms(terms: list[tuple[Fraction, str]]) -> str:
    out = ""
    for coef, mono in terms:
        if coef == 0:
            continue
        sign = "-" if coef < 0 else "+"
        mag = abs(coef)
        body = _fmt(mag) if (mag != 1 or not mono) else ""
        text = f"{body}{mono}"
        if not out:
            out = text if sign == "+" else f"-{text}"
        else:
            out += f" {sign} {text}"
    return out or "0"


def render_piece(piece: Piece) -> str:
    if isinstance(piece, Var):
        return piece.name
    if isinstance(piece, Linear):
        return _join_terms([(Fraction(piece.cx), "x"), (Fraction(piece.cy), "y")])
    if isinstance(piece, Ratio):
        return "y/x" if piece.q == 1 else f"{_fmt(piece.q)} y/x"
    return _join_terms([(piece.c, "xy"), (piece.d, "x"), (piece.e, "y"), (piece.f, "")])


def render_factored(piece: BilinearPiece) -> str:
    """Human-oriented product form, e.g. ``(x+1)(y+2)`` or ``1/2(2x)(2y+1)``."""
    fp = factor_bilinear(piece)

    def factor(coef: int, var: str, const: int) -> str:
        head = var if coef == 1 else f"{coef}{var}"
        if const == 0:
            return head if coef == 1 else f"({head})"
        return f"({head}{'+' if const > 0 else '-'}{abs(const)})"

    g = gcd(fp.a, abs(fp.n))
    g2 = gcd(fp.b, abs(fp.m))
    q = fp.q * g * g2
    body = factor(fp.a // g, "x", fp.n // g) + factor(fp.b // g2, "y", fp.m // g2)
    return body if q == 1 else f"{_fmt(q)}{body}"


def render(pattern: Pattern) -> str:
    return ", ".join(render_piece(p) for p in pattern.pieces)
