"""Pattern text -> :class:`Pattern`.

Accepted input is a comma-separated list of pieces. Each piece is a
rational-coefficient expression in x and y built from sums, differences,
juxtaposition (or ``*``) and parentheses, plus the atom ``y/x``::

    x, y, (x+1)(y+2)
    x, y, 2xy + x
    x, y, 3x - 2y, 5 y/x
    x, y, (1/2)(x+1)(y+1)
    2x, 2y, 3xy, x(3y+2)

After expansion every piece must be one of: ``x``, ``y``, an integer linear
form ``cx x + cy y``, a positive multiple of ``y/x``, or ``c xy + d x + e y + f``
with ``c > 0`` and ``cf = de``. A pattern that lists ``hx, hy`` instead of
``x, y`` is divided through by h (the two are partition-regular together).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .pattern import (
    BilinearPiece,
    Linear,
    NotFactorableError,
    Pattern,
    PatternError,
    Piece,
    Ratio,
    X,
    Y,
    linear_or_var,
    scale_piece,
)

# monomial key (deg_x, deg_y); y/x is (-1, 1)
Poly = dict[tuple[int, int], Fraction]

_TOKEN = re.compile(r"\s*(?:(\d+)|(.))")

_ALLOWED = {(1, 1), (1, 0), (0, 1), (0, 0)}
RATIO_MONO = (-1, 1)


class ParseError(PatternError):
    def __init__(self, message: str, pos: int, text: str = ""):
        self.message = message
        self.pos = pos
        self.text = text
        super().__init__(f"{message} at position {pos}")

    def pretty(self) -> str:
        if not self.text:
            return str(self)
        return f"{self}\n  {self.text}\n  {' ' * self.pos}^"


@dataclass
class _Tok:
    kind: str  # 'num', or the literal character
    value: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # trailing whitespace
            break
        if m.group(1) is not None:
            toks.append(_Tok("num", m.group(1), m.start(1)))
        else:
            ch = m.group(2)
            if ch not in "xy+-*/(),":
                raise ParseError(f"unexpected character {ch!r}", m.start(2), text)
            toks.append(_Tok(ch, ch, m.start(2)))
        pos = m.end()
    return toks


def _mul(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for (ax, ay), ca in a.items():
        for (bx, by), cb in b.items():
            key = (ax + bx, ay + by)
            out[key] = out.get(key, Fraction(0)) + ca * cb
    return {k: v for k, v in out.items() if v != 0}


def _add(a: Poly, b: Poly, sign: int = 1) -> Poly:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, Fraction(0)) + sign * v
    return {k: v for k, v in out.items() if v != 0}


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> _Tok | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def error(self, message: str, tok: _Tok | None = None) -> ParseError:
        pos = tok.pos if tok is not None else len(self.text)
        return ParseError(message, pos, self.text)

    def take(self, kind: str) -> _Tok:
        tok = self.peek()
        if tok is None or tok.kind != kind:
            found = "end of input" if tok is None else repr(tok.value)
            raise self.error(f"expected {kind!r}, found {found}", tok)
        self.i += 1
        return tok

    def pattern(self) -> list[tuple[Poly, int]]:
        pieces = [self.piece()]
        while self.peek() is not None:
            self.take(",")
            pieces.append(self.piece())
        return pieces

    def piece(self) -> tuple[Poly, int]:
        tok = self.peek()
        if tok is None or tok.kind == ",":
            raise self.error("empty piece", tok)
        return self.expr(), tok.pos

    def expr(self) -> Poly:
        sign = 1
        tok = self.peek()
        if tok is not None and tok.kind in "+-":
            self.i += 1
            sign = -1 if tok.kind == "-" else 1
        out = _add({}, self.term(), sign)
        while (tok := self.peek()) is not None and tok.kind in "+-":
            self.i += 1
            out = _add(out, self.term(), -1 if tok.kind == "-" else 1)
        return out

    def term(self) -> Poly:
        out = self.factor()
        while (tok := self.peek()) is not None and tok.kind in ("num", "x", "y", "(", "*"):
            if tok.kind == "*":
                self.i += 1
            out = _mul(out, self.factor())
        return out

    def factor(self) -> Poly:
        tok = self.peek()
        if tok is None:
            raise self.error("unexpected end of input")
        if tok.kind == "num":
            self.i += 1
            value = Fraction(int(tok.value))
            nxt = self.peek()
            if nxt is not None and nxt.kind == "/":
                self.i += 1
                den = self.take("num")
                if int(den.value) == 0:
                    raise self.error("division by zero", den)
                value /= int(den.value)
            return {(0, 0): value} if value else {}
        if tok.kind == "x":
            self.i += 1
            return {(1, 0): Fraction(1)}
        if tok.kind == "y":
            self.i += 1
            nxt = self.peek()
            if nxt is not None and nxt.kind == "/":
                self.i += 1
                self.take("x")
                return {RATIO_MONO: Fraction(1)}
            return {(0, 1): Fraction(1)}
        if tok.kind == "(":
            self.i += 1
            inner = self.expr()
            self.take(")")
            return inner
        raise self.error(f"unexpected {tok.value!r}", tok)


def classify(poly: Poly, pos: int = 0, text: str = "") -> Piece:
    """Turn an expanded polynomial into a typed piece."""
    if not poly:
        raise ParseError("piece is identically zero", pos, text)
    if RATIO_MONO in poly:
        if len(poly) > 1:
            raise ParseError("y/x cannot be combined with other terms", pos, text)
        q = poly[RATIO_MONO]
        if q <= 0:
            raise ParseError("ratio coefficient must be positive", pos, text)
        return Ratio(q)
    bad = set(poly) - _ALLOWED
    if bad:
        raise ParseError("only monomials xy, x, y and constants are supported", pos, text)
    c = poly.get((1, 1), Fraction(0))
    d = poly.get((1, 0), Fraction(0))
    e = poly.get((0, 1), Fraction(0))
    f = poly.get((0, 0), Fraction(0))
    if c != 0:
        if c < 0:
            raise NotFactorableError(f"xy coefficient must be positive (c > 0), got {c}")
        if c * f != d * e:
            raise NotFactorableError(
                f"c*f = d*e violated ({c}*{f} != {d}*{e}); not a product of two linear factors"
            )
        return BilinearPiece(c, d, e)
    if f != 0:
        raise ParseError("pieces with a constant term need an xy term", pos, text)
    if d.denominator != 1 or e.denominator != 1:
        raise ParseError("linear pieces need integer coefficients", pos, text)
    return linear_or_var(int(d), int(e))


def _normalize_scale(pieces: list[Piece]) -> list[Piece]:
    if X in pieces and Y in pieces:
        return pieces
    for p in pieces:
        if isinstance(p, Linear) and p.cy == 0 and p.cx >= 2 and Linear(0, p.cx) in pieces:
            factor = Fraction(1, p.cx)
            return [scale_piece(q, factor) for q in pieces]
    raise PatternError("a pattern must contain x and y (or hx and hy for a common h)")


def parse_pattern(text: str) -> Pattern:
    parser = _Parser(text)
    if not parser.toks:
        raise ParseError("empty pattern", 0, text)
    pieces = [classify(poly, pos, text) for poly, pos in parser.pattern()]
    return Pattern(tuple(_normalize_scale(pieces)), source=text)


def parse_piece(text: str) -> Piece:
    parser = _Parser(text)
    if not parser.toks:
        raise ParseError("empty piece", 0, text)
    poly, pos = parser.piece()
    if parser.peek() is not None:
        raise parser.error("trailing input", parser.peek())
    return classify(poly, pos, text)
