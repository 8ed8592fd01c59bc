"""Verdict engine for partition regularity (PR) of x/y patterns.

Every verdict carries an ordered derivation: the rules applied, a short
statement of the result each rule rests on, and the intermediate values
computed along the way. Patterns outside every decided family come back as
UNSUPPORTED; families that are known but undecided come back as OPEN.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Any

from .arith import RationalLike, as_rational, is_perfect_square
from .pattern import (
    BilinearPiece,
    Linear,
    Pattern,
    Ratio,
    canonical_piece,
    make_pattern,
    render_factored,
)


class Status(str, enum.Enum):
    PR = "PR"
    NOT_PR = "NOT_PR"
    OPEN = "OPEN"
    UNSUPPORTED = "UNSUPPORTED"


class Case(str, enum.Enum):
    A = "A"  # (d, e) = (t^2, (t+1)^2)
    B = "B"  # (d, e) = (t(t-1), t(t+1))


class Rule(str, enum.Enum):
    SCHUR = "SCHUR"
    HINDMAN_PRODUCT = "HINDMAN_PRODUCT"
    THM_A_RATIO = "THM_A_RATIO"
    QCD = "QCD"
    SUM_SHIFT = "SUM_SHIFT"
    QXY_PURE = "QXY_PURE"
    THM_B_NO_T = "THM_B_NO_T"
    THM_C_DIV = "THM_C_DIV"
    THM_C_REDUCE = "THM_C_REDUCE"
    GOSWAMI_CANONICAL = "GOSWAMI_CANONICAL"
    LHDN = "LHDN"
    NLD_FAMILY = "NLD_FAMILY"
    QABQAB = "QABQAB"
    THM_E_SHAPE = "THM_E_SHAPE"
    THM_F_CROSS = "THM_F_CROSS"
    CO_QXY = "CO_QXY"
    FIVE_PIECE = "FIVE_PIECE"
    MANY_PIECE = "MANY_PIECE"
    OPEN_Q61 = "OPEN_Q61"
    OPEN_Q63 = "OPEN_Q63"
    OPEN_Q64 = "OPEN_Q64"
    OPEN_SUM_PRODUCT = "OPEN_SUM_PRODUCT"

    @property
    def citation(self) -> str:
        return CITATIONS[self]


CITATIONS: dict[Rule, str] = {
    Rule.SCHUR: "Schur: x, y, x+y is PR",
    Rule.HINDMAN_PRODUCT: "Hindman (multiplicative form): x, y, xy is PR",
    Rule.THM_A_RATIO: (
        "finite sums and ratios: some colour holds FS(x_i) and every sum_G/sum_F (F<G); "
        "so x, y, x+y, q*y/x is PR for every q in Q>0"
    ),
    Rule.QCD: "x, y, cx+dy, q*y/x with c, d nonzero integers is PR iff c = d = 1",
    Rule.SUM_SHIFT: "x, y, x+y, x(y+m) PR implies m = 1 (mod p: r = 2r so r = 0; then smod(m) = 1)",
    Rule.QXY_PURE: "x, y, q*xy is PR for every q in Q>0",
    Rule.THM_B_NO_T: (
        "nm != 0 and x, y, q(ax+n)(by+m) PR implies some t in Z has "
        "(qam, qbn) = (t^2, (t+1)^2) or (t(t-1), t(t+1))"
    ),
    Rule.THM_C_DIV: (
        "given t, PR needs (am+bn)/2ab - 1/2qab in Z (squares case) "
        "or (am+bn)/2ab in Z (products case)"
    ),
    Rule.THM_C_REDUCE: (
        "given t and an integral shift, x, y, q(ax+n)(by+m) is PR iff x, y, (x+qbn)(y+qam) is PR"
    ),
    Rule.GOSWAMI_CANONICAL: "Goswami: x, y, xy, x(y+1) is PR; so are x, y, x(y+1) and x, y, (x+1)y",
    Rule.LHDN: "(h,a) = 1 = (b,m) and hx, hy, a*x(by+m) PR implies a = 1",
    Rule.NLD_FAMILY: "mx, my, x(by+m) is PR for all coprime b, m in N",
    Rule.QABQAB: "x, y, P1, P2 PR implies q1a1b1 = q2a2b2 (equal xy coefficients)",
    Rule.THM_E_SHAPE: (
        "x, y, P1, P2 PR implies P1 = P2, P1(x,y) = P2(y,x), or {P1, P2} = {qxy, qxy+x} / {qxy, qxy+y}"
    ),
    Rule.THM_F_CROSS: (
        "x, y, P(x,y), P(y,x) is PR iff x, y, (x+qbn)(y+qam), (x+qam)(y+qbn) is PR "
        "and t exists with the integral shift"
    ),
    Rule.CO_QXY: (
        "x, y, qxy, q2(a2x+n2)(b2y+m2) with equal xy coefficient is PR iff n2 = m2 = 0, "
        "or n2 = 0 and q2a2m2 = 1, or m2 = 0 and q2b2n2 = 1"
    ),
    Rule.FIVE_PIECE: (
        "a PR pattern with 3 product pieces is x, y, qxy, qxy+x, qxy+y, "
        "and is PR iff x, y, xy, xy+x, xy+y is"
    ),
    Rule.MANY_PIECE: "no pattern x, y plus 4 or more distinct product pieces is PR",
    Rule.OPEN_Q61: (
        "open: which z = (x+t^2)(y+(t+1)^2), z = (x+t(t-1))(y+t(t+1)), z = qx(by+m) are PR"
    ),
    Rule.OPEN_Q63: (
        "open: x, y, (x+t^2)(y+(t+1)^2), (x+(t+1)^2)(y+t^2); the t(t-1), t(t+1) analogue; "
        "and x, y, xy, xy+x, xy+y"
    ),
    Rule.OPEN_Q64: "open: is x, y, x+y, x(y+1) PR?",
    Rule.OPEN_SUM_PRODUCT: "open: is x, y, x+y, xy PR?",
}

PR_RULES = frozenset({
    Rule.SCHUR, Rule.HINDMAN_PRODUCT, Rule.THM_A_RATIO, Rule.QXY_PURE,
    Rule.GOSWAMI_CANONICAL, Rule.NLD_FAMILY, Rule.CO_QXY,
})
NOT_PR_RULES = frozenset({
    Rule.THM_B_NO_T, Rule.THM_C_DIV, Rule.THM_E_SHAPE, Rule.THM_F_CROSS, Rule.QCD,
    Rule.QABQAB, Rule.LHDN, Rule.CO_QXY, Rule.SUM_SHIFT, Rule.FIVE_PIECE, Rule.MANY_PIECE,
})
OPEN_RULES = frozenset({Rule.OPEN_Q61, Rule.OPEN_Q63, Rule.OPEN_Q64, Rule.OPEN_SUM_PRODUCT})


@dataclass(frozen=True)
class DerivationStep:
    rule: Rule
    detail: dict[str, Any] = field(default_factory=dict)

    @property
    def citation(self) -> str:
        return self.rule.citation


@dataclass(frozen=True)
class Verdict:
    status: Status
    derivation: tuple[DerivationStep, ...] = ()
    canonical: Pattern | None = None
    t: int | None = None
    case: Case | None = None
    shift: Fraction | None = None

    @property
    def rule(self) -> Rule | None:
        """The rule that settled the status (the last step)."""
        return self.derivation[-1].rule if self.derivation else None

    @property
    def rules(self) -> tuple[Rule, ...]:
        return tuple(s.rule for s in self.derivation)


def _step(rule: Rule, **detail) -> DerivationStep:
    return DerivationStep(rule, detail)


# -- t-condition and shift ---------------------------------------------------

def _as_int(q: Fraction) -> int | None:
    return int(q) if q.denominator == 1 else None


def find_t(d: RationalLike, e: RationalLike) -> tuple[Case, int] | None:
    """The unique (case, t) with (d, e) = (t^2, (t+1)^2) [A] or (t(t-1), t(t+1)) [B].

    Uses integer square roots: d = s^2 gives t = +-s, and 4d+1 = u^2 gives
    t = (1 +- u)/2. The cases cannot both hold since e - d is odd in A and
    even in B.
    """
    d_int, e_int = _as_int(as_rational(d)), _as_int(as_rational(e))
    if d_int is None or e_int is None:
        return None
    s = is_perfect_square(d_int)
    if s is not None:
        for t in (s, -s):
            if e_int == (t + 1) ** 2:
                return Case.A, t
    u = is_perfect_square(4 * d_int + 1)
    if u is not None:
        for t2 in (1 + u, 1 - u):
            t = t2 // 2
            if t * (t - 1) == d_int and e_int == t * (t + 1):
                return Case.B, t
    return None


def shift_sigma(case: Case, c: RationalLike, d: RationalLike, e: RationalLike) -> tuple[Fraction, bool]:
    """Translation constant of the change of variables x -> c(x - sigma).

    Squares case: sigma = -(d+e-1)/2c; products case: sigma = -(d+e)/2c.
    Integrality of sigma is the divisibility condition for PR.
    """
    c, d, e = as_rational(c), as_rational(d), as_rational(e)
    num = d + e - 1 if case is Case.A else d + e
    sigma = -num / (2 * c)
    return sigma, sigma.denominator == 1


def coprime_reduction(piece: BilinearPiece) -> tuple[int, int, int, int]:
    """For a piece with exactly one of d, e zero, write it as hx, hy, K*x(by+m).

    Returns ``(K, H, b, m)`` with ``(H, K) = 1 = (b, m)`` and ``b > 0``, using
    the orientation where x is the unshifted factor (swap first if d == 0).
    """
    if (piece.d == 0) == (piece.e == 0):
        raise ValueError("coprime reduction needs exactly one zero shift")
    c, d = (piece.c, piece.d) if piece.e == 0 else (piece.c, piece.e)
    ratio = c / d  # = b/m
    b, m = abs(ratio.numerator), ratio.denominator * (1 if ratio > 0 else -1)
    lam = c / b
    return lam.numerator, lam.denominator, b, m


def _canon_pattern(*pieces: BilinearPiece) -> Pattern:
    return make_pattern(*pieces)


# -- three pieces ------------------------------------------------------------

def analyze3(piece: BilinearPiece) -> Verdict:
    """Decide x, y, c xy + d x + e y + f."""
    c, d, e = piece.c, piece.d, piece.e
    form = render_factored(piece)
    if d == 0 and e == 0:
        rule = Rule.HINDMAN_PRODUCT if c == 1 else Rule.QXY_PURE
        return Verdict(Status.PR, (_step(rule, piece=form, q=c),))

    found = find_t(d, e)
    steps: list[DerivationStep] = []
    if found is None:
        if d != 0 and e != 0:
            return Verdict(Status.NOT_PR, (_step(Rule.THM_B_NO_T, piece=form, d=d, e=e),))
        K, H, b, m = coprime_reduction(piece)
        detail = dict(piece=form, K=K, H=H, b=b, m=m)
        if K != 1:
            return Verdict(Status.NOT_PR, (_step(Rule.LHDN, **detail),))
        return Verdict(Status.OPEN, (_step(Rule.LHDN, **detail, passes=True), _step(Rule.OPEN_Q61, item=3)))

    case, t = found
    sigma, integral = shift_sigma(case, c, d, e)
    detail = dict(piece=form, case=case.value, t=t, sigma=sigma)
    if not integral:
        return Verdict(Status.NOT_PR, (_step(Rule.THM_C_DIV, **detail),), t=t, case=case, shift=sigma)

    canon = canonical_piece(piece)
    steps.append(_step(Rule.THM_C_REDUCE, **detail, canonical=render_factored(canon)))
    canon_pattern = _canon_pattern(canon)
    common = dict(canonical=canon_pattern, t=t, case=case, shift=sigma)
    if d != 0 and e != 0:
        steps.append(_step(Rule.OPEN_Q61, item=1 if case is Case.A else 2))
        return Verdict(Status.OPEN, tuple(steps), **common)
    if {d, e} == {0, 1}:
        if c == 1:
            steps = [_step(Rule.GOSWAMI_CANONICAL, piece=form, symmetric=(d == 0))]
        else:
            steps.append(_step(Rule.NLD_FAMILY, symmetric=(d == 0)))
        return Verdict(Status.PR, tuple(steps), **common)
    # canonical x(y+2) or (x+2)y
    steps.append(_step(Rule.OPEN_Q61, item=3))
    return Verdict(Status.OPEN, tuple(steps), **common)


# -- linear + ratio, sum + shift ---------------------------------------------

def analyze_linear_ratio(cx: int, cy: int, q: RationalLike) -> Verdict:
    """Decide x, y, cx*x + cy*y, q*y/x."""
    q = as_rational(q)
    if cx == 0 or cy == 0:
        return Verdict(Status.UNSUPPORTED)
    if cx == 1 and cy == 1:
        return Verdict(Status.PR, (_step(Rule.THM_A_RATIO, q=q),))
    return Verdict(Status.NOT_PR, (_step(Rule.QCD, c=cx, d=cy, q=q),))


def analyze_sum_shift(m: int) -> Verdict:
    """Decide x, y, x+y, x(y+m)."""
    if m == 1:
        return Verdict(Status.OPEN, (_step(Rule.OPEN_Q64, m=m),))
    if m == 0:
        return Verdict(Status.OPEN, (_step(Rule.OPEN_SUM_PRODUCT, m=m),))
    return Verdict(Status.NOT_PR, (_step(Rule.SUM_SHIFT, m=m),))


# -- four pieces -------------------------------------------------------------

def analyze4(p1: BilinearPiece, p2: BilinearPiece) -> Verdict:
    """Decide x, y, p1, p2 for distinct bilinear pieces."""
    if p1 == p2:
        raise ValueError("analyze4 needs two distinct pieces")
    forms = [render_factored(p1), render_factored(p2)]
    if p1.c != p2.c:
        return Verdict(Status.NOT_PR, (_step(Rule.QABQAB, pieces=forms, c1=p1.c, c2=p2.c),))

    if (p2.d, p2.e) == (p1.e, p1.d):
        found = find_t(p1.d, p1.e)
        if found is None:
            return Verdict(Status.NOT_PR, (_step(Rule.THM_F_CROSS, pieces=forms, t=None),))
        case, t = found
        sigma, integral = shift_sigma(case, p1.c, p1.d, p1.e)
        detail = dict(pieces=forms, case=case.value, t=t, sigma=sigma)
        if not integral:
            return Verdict(Status.NOT_PR, (_step(Rule.THM_F_CROSS, **detail),), t=t, case=case, shift=sigma)
        c1, c2 = canonical_piece(p1), canonical_piece(p2)
        canon = _canon_pattern(c1, c2)
        steps = (
            _step(Rule.THM_F_CROSS, **detail, canonical=[render_factored(c1), render_factored(c2)]),
            _step(Rule.OPEN_Q63, item=1 if case is Case.A else 2),
        )
        return Verdict(Status.OPEN, steps, canonical=canon, t=t, case=case, shift=sigma)

    pure = [p for p in (p1, p2) if p.is_pure]
    if pure:
        other = p2 if p1.is_pure else p1
        ok = (other.d, other.e) in ((1, 0), (0, 1))
        status = Status.PR if ok else Status.NOT_PR
        return Verdict(status, (_step(Rule.CO_QXY, pieces=forms, d=other.d, e=other.e),))

    return Verdict(Status.NOT_PR, (_step(Rule.THM_E_SHAPE, pieces=forms),))


def analyze_many(pieces: list[BilinearPiece] | tuple[BilinearPiece, ...]) -> Verdict:
    """Decide x, y plus three or more distinct bilinear pieces."""
    pieces = list(dict.fromkeys(pieces))
    if len(pieces) < 3:
        raise ValueError("analyze_many needs at least three distinct pieces")
    forms = [render_factored(p) for p in pieces]
    if len(pieces) >= 4:
        return Verdict(Status.NOT_PR, (_step(Rule.MANY_PIECE, pieces=forms, count=len(pieces)),))
    c = pieces[0].c
    target = {BilinearPiece(c, 0, 0), BilinearPiece(c, 1, 0), BilinearPiece(c, 0, 1)}
    if set(pieces) != target:
        return Verdict(Status.NOT_PR, (_step(Rule.FIVE_PIECE, pieces=forms),))
    canon = _canon_pattern(*(BilinearPiece(1, p.d, p.e) for p in pieces))
    steps = (
        _step(Rule.FIVE_PIECE, pieces=forms, q=c, reduced_to="x, y, xy, xy+x, xy+y"),
        _step(Rule.OPEN_Q63, item=3),
    )
    return Verdict(Status.OPEN, steps, canonical=canon)


# -- dispatcher --------------------------------------------------------------

def analyze(pattern: Pattern) -> Verdict:
    bil, lin, rat = pattern.bilinear, pattern.linear, pattern.ratios
    if not lin and not rat:
        if len(bil) == 1:
            return analyze3(bil[0])
        if len(bil) == 2:
            return analyze4(*bil)
        if len(bil) >= 3:
            return analyze_many(bil)
        return Verdict(Status.UNSUPPORTED)
    if len(lin) == 1 and not bil:
        (l,) = lin
        if len(rat) == 1:
            return analyze_linear_ratio(l.cx, l.cy, rat[0].q)
        if not rat and (l.cx, l.cy) == (1, 1):
            return Verdict(Status.PR, (_step(Rule.SCHUR),))
    if lin == (Linear(1, 1),) and not rat and len(bil) == 1:
        p = bil[0]
        if p.c == 1 and (p.d == 0 or p.e == 0):
            shift = p.d if p.e == 0 else p.e
            if shift.denominator == 1:
                return analyze_sum_shift(int(shift))
    return Verdict(Status.UNSUPPORTED)


def sub_patterns(pattern: Pattern) -> list[Pattern]:
    """Every x, y + proper nonempty subset of the bilinear pieces (for blocking)."""
    bil = pattern.bilinear
    out = []
    for k in range(1, min(len(bil), 3)):
        for combo in combinations(bil, k):
            out.append(make_pattern(*combo))
    return out


__all__ = [
    "Case", "DerivationStep", "Rule", "Status", "Verdict", "analyze", "analyze3", "analyze4",
    "analyze_linear_ratio", "analyze_many", "analyze_sum_shift", "coprime_reduction", "find_t",
    "shift_sigma", "sub_patterns",
]
