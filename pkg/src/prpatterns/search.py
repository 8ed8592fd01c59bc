"""Finite-scale evidence: solution enumeration and blocking-colouring checks.

"Infinitely many monochromatic solutions" is replaced by a stabilization
test: a colouring blocks a pattern up to N when every monochromatic
solution with x, y <= N already has x, y <= N // 2. This is evidence, not a
proof; no growth bound makes it one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .analyzer import Rule, Status, Verdict, analyze, coprime_reduction, sub_patterns
from .arith import SkipPrime, lcm, primes_up_to, solve_fixedpoint_mod_p
from .colourings import BinLen, Colouring, Product, ResidueMod, SmodVal
from .pattern import BilinearPiece, Linear, Pattern, Ratio, Var, evaluate_piece

DEFAULT_PROPOSAL_PRIME_BOUND = 1000
_INT64_SAFE = 1 << 62
_CHUNK_CELLS = 1 << 22
_RESIDUE_TABLE_LIMIT = 2048


@dataclass(frozen=True)
class SolutionTuple:
    x: int
    y: int
    values: tuple[int, ...]


@dataclass(frozen=True)
class BlockReport:
    pattern: Pattern
    colouring: Colouring
    N: int
    count_half: int
    count_full: int
    exceptional: tuple[SolutionTuple, ...] = ()
    uncoverable: int = 0
    complete: bool = True  # False when the scan stopped at the first new solution

    @property
    def passed(self) -> bool:
        return self.count_full == self.count_half


# -- vectorized evaluation -----------------------------------------------------

def _value_bound(pattern: Pattern, N: int) -> int:
    bound = N
    for p in pattern.pieces:
        if isinstance(p, Linear):
            bound = max(bound, (abs(p.cx) + abs(p.cy)) * N)
        elif isinstance(p, Ratio):
            bound = max(bound, p.q.numerator * N)
        elif isinstance(p, BilinearPiece):
            C, D, E, F, _ = p.integer_form
            bound = max(bound, abs(C) * N * N + (abs(D) + abs(E)) * N + abs(F))
    return bound


def _eval_arrays(piece, xs: np.ndarray, ys: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Values of a piece on paired arrays, and the mask where they are positive integers."""
    if isinstance(piece, Var):
        v = xs if piece.name == "x" else ys
        return v, np.ones(v.shape, dtype=bool)
    if isinstance(piece, Linear):
        v = piece.cx * xs + piece.cy * ys
        return v, v > 0
    if isinstance(piece, Ratio):
        k, h = piece.q.numerator, piece.q.denominator
        ok = ys % xs == 0
        quo = k * (ys // xs)
        ok &= quo % h == 0
        return quo // h, ok
    C, D, E, F, den = piece.integer_form
    num = C * xs * ys + D * xs + E * ys + F
    ok = num > 0
    if den != 1:
        ok &= num % den == 0
    return num // den, ok


@dataclass
class _Scan:
    count_full: int = 0
    count_half: int = 0
    uncoverable: int = 0
    found: list[SolutionTuple] = field(default_factory=list)


def _residue_table(pattern: Pattern, colouring: Colouring) -> tuple[int, np.ndarray] | None:
    """Pairs of residues mod L that can carry a monochromatic solution.

    Only for Ratio-free patterns whose colouring factors through x mod M;
    L = M times the common denominator of the bilinear pieces.
    """
    M = colouring.residue_modulus()
    if M is None or pattern.ratios:
        return None
    den = lcm(*(p.integer_form[4] for p in pattern.bilinear)) if pattern.bilinear else 1
    L = M * den
    if L > _RESIDUE_TABLE_LIMIT:
        return None
    r = np.arange(L, dtype=np.int64)
    xs, ys = np.meshgrid(r, r, indexing="ij")
    # shift to positive representatives so residue colourings see positive inputs
    xs, ys = xs + L, ys + L
    cx = colouring.colours(xs)
    good = cx == colouring.colours(ys)
    for piece in pattern.extra:
        if isinstance(piece, BilinearPiece):
            C, D, E, F, d = piece.integer_form
            num = (C * xs * ys + D * xs + E * ys + F) % L
            good &= num % d == 0
            val = (num // d) % M + M
        else:
            val = (piece.cx * xs + piece.cy * ys) % M + M
        good &= colouring.colours(val) == cx
    return L, good


@dataclass
class _Signatures:
    """Per-value signatures such that (x, y) can only be monochromatic when
    ``compat[sig_x[x-1], sig_y[y-1]]``; ``exact`` means the converse holds too
    (for the bilinear pieces), so counts follow from histograms."""

    sig_x: np.ndarray
    sig_y: np.ndarray
    compat: np.ndarray
    exact: bool = False
    cols: np.ndarray | None = None  # colours of 1..N


def _group(columns: list[np.ndarray]) -> tuple[np.ndarray, np.ndarray]:
    _, rep, inv = np.unique(np.stack(columns, axis=1), axis=0, return_index=True, return_inverse=True)
    return rep, inv.ravel()


def _factor_signatures(pattern: Pattern, colouring: Colouring, N: int, cols: np.ndarray) -> _Signatures | None:
    """Signatures from multiplicative colourings.

    Each bilinear value is (Cx+E)(Cy+D)/g with g = C*den; when the colour of
    A*B/g depends only on states of A and B, one representative pair per
    signature pair decides monochromaticity on all bilinear pieces.
    """
    if pattern.ratios or not pattern.bilinear:
        return None
    n = np.arange(1, N + 1, dtype=np.int64)
    x_cols, y_cols = [cols], [cols]
    for piece in pattern.bilinear:
        C, D, E, _, den = piece.integer_form
        g = C * den
        for factor, out in ((C * n + E, x_cols), (C * n + D, y_cols)):
            st = colouring.factor_state(np.maximum(np.abs(factor), 1), g)
            if st is None:
                return None
            out += [np.sign(factor), st[0]]
    rep_x, sig_x = _group(x_cols)
    rep_y, sig_y = _group(y_cols)
    compat = np.zeros((len(rep_x), len(rep_y)), dtype=bool)
    for i, xi in enumerate(rep_x.tolist()):
        x, c = xi + 1, int(cols[xi])
        for j, yj in enumerate(rep_y.tolist()):
            if int(cols[yj]) != c:
                continue
            y = yj + 1
            for piece in pattern.bilinear:
                v = evaluate_piece(piece, x, y)
                if v is None or colouring.colour(v) != c:
                    break
            else:
                compat[i, j] = True
    return _Signatures(sig_x, sig_y, compat, exact=True, cols=cols)


def _signatures(pattern: Pattern, colouring: Colouring, N: int, big: bool) -> _Signatures | None:
    """None means no pair can be monochromatic."""
    n = np.arange(1, N + 1, dtype=np.int64)
    cols = colouring.colours(n)
    if not big:
        table = _residue_table(pattern, colouring)
        if table is not None:
            L, good = table
            if not good.any():
                return None
            res = n % L
            return _Signatures(res, res, good, exact=not pattern.ratios and _residue_exact(pattern), cols=cols)
        keyed = _factor_signatures(pattern, colouring, N, cols)
        if keyed is not None:
            return keyed if keyed.compat.any() else None
    columns = [cols]
    coarse = None if big else colouring.residue_part()
    sub = None if coarse is None else _residue_table(pattern, coarse)
    if sub is not None:
        if not sub[1].any():
            return None
        columns.append(n % sub[0])
    rep, sig = _group(columns)
    rep_cols = cols[rep]
    compat = (rep_cols[:, None] == rep_cols[None, :]) & (rep_cols[:, None] >= 0)
    if sub is not None:
        res = n[rep] % sub[0]
        compat &= sub[1][res[:, None], res[None, :]]
    return _Signatures(sig, sig, compat, cols=cols)


def _residue_exact(pattern: Pattern) -> bool:
    # the residue table ignores positivity, so it is exact only when every
    # bilinear piece is positive on all of N^2
    return all(min(p.integer_form[:4]) >= 0 for p in pattern.bilinear)


def _keyed_count(pattern: Pattern, sigs: _Signatures, N: int, cap: int | None) -> _Scan:
    """Exact counts straight from signature histograms."""
    out = _Scan()
    half = N // 2
    nx, ny = sigs.compat.shape
    full_x = np.bincount(sigs.sig_x, minlength=nx).astype(object)
    full_y = np.bincount(sigs.sig_y, minlength=ny).astype(object)
    half_x = np.bincount(sigs.sig_x[:half], minlength=nx).astype(object)
    half_y = np.bincount(sigs.sig_y[:half], minlength=ny).astype(object)
    v = sigs.compat.astype(object)  # exact big-integer sums
    out.count_full = int(full_x @ v @ full_y)
    out.count_half = int(half_x @ v @ half_y)
    if out.count_full and (cap is None or cap > 0):
        for xs, ys in _candidate_chunks(pattern, sigs, N, np.int64):
            for x, y in zip(xs.tolist(), ys.tolist()):
                out.found.append(SolutionTuple(x, y, tuple(evaluate_piece(p, x, y) for p in pattern.pieces)))
                if cap is not None and len(out.found) >= cap:
                    return out
    return out


def _candidate_chunks(pattern: Pattern, sigs: _Signatures, N: int, dtype) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Candidate (x, y) pairs in lexicographic order."""
    if pattern.ratios:
        # y runs over multiples of x
        rows = max(1, _CHUNK_CELLS // max(1, N))
        for x0 in range(1, N + 1, rows):
            xs_list, ys_list = [], []
            for x in range(x0, min(N, x0 + rows - 1) + 1):
                ys = np.arange(x, N + 1, x, dtype=np.int64)
                ys = ys[sigs.compat[sigs.sig_x[x - 1], sigs.sig_y[ys - 1]]]
                xs_list.append(np.full(ys.shape, x, dtype=np.int64))
                ys_list.append(ys)
            yield np.concatenate(xs_list).astype(dtype), np.concatenate(ys_list).astype(dtype)
        return
    order = np.argsort(sigs.sig_y, kind="stable")
    bounds = np.searchsorted(sigs.sig_y[order], np.arange(sigs.compat.shape[1] + 1))
    by_sig = [order[bounds[j]:bounds[j + 1]] + 1 for j in range(sigs.compat.shape[1])]
    cache: dict[int, np.ndarray] = {}

    def ys_for(s: int) -> np.ndarray:
        if s not in cache:
            parts = [by_sig[j] for j in np.nonzero(sigs.compat[s])[0]]
            cache[s] = np.sort(np.concatenate(parts)) if parts else np.zeros(0, dtype=np.int64)
        return cache[s]

    xs_list, ys_list, cells = [], [], 0
    for x in range(1, N + 1):
        ys = ys_for(int(sigs.sig_x[x - 1]))
        if ys.size:
            xs_list.append(np.full(ys.shape, x, dtype=np.int64))
            ys_list.append(ys)
            cells += ys.size
        if cells >= _CHUNK_CELLS or (x == N and xs_list):
            yield np.concatenate(xs_list).astype(dtype), np.concatenate(ys_list).astype(dtype)
            xs_list, ys_list, cells = [], [], 0


def _scan(pattern: Pattern, colouring: Colouring, N: int, cap: int | None, stop_after: int | None = None) -> _Scan:
    out = _Scan()
    half = N // 2
    big = _value_bound(pattern, N) >= _INT64_SAFE
    dtype = object if big else np.int64
    sigs = _signatures(pattern, colouring, N, big)
    if sigs is None:
        return out
    if sigs.exact and not pattern.linear and not pattern.ratios:
        return _keyed_count(pattern, sigs, N, cap)

    # candidates already share a colour; exact signatures also settle the bilinear pieces
    to_check = [p for p in pattern.extra if not (sigs.exact and isinstance(p, BilinearPiece))]
    for xs, ys in _candidate_chunks(pattern, sigs, N, dtype):
        # filter piece by piece, compressing survivors
        target = sigs.cols[xs.astype(np.int64) - 1]
        outside = np.zeros(xs.shape, dtype=bool)
        for piece in to_check:
            if xs.size == 0:
                break
            v, ok = _eval_arrays(piece, xs, ys)
            xs, ys, target, outside, v = xs[ok], ys[ok], target[ok], outside[ok], v[ok]
            col = colouring.colours(v)
            missing = col < 0
            keep = (col == target) | missing
            xs, ys, target = xs[keep], ys[keep], target[keep]
            outside = outside[keep] | missing[keep]
        if xs.size == 0:
            continue
        out.uncoverable += int(np.count_nonzero(outside))
        mono = ~outside
        xs, ys = xs[mono], ys[mono]
        if xs.size == 0:
            continue
        out.count_full += int(xs.size)
        out.count_half += int(np.count_nonzero((xs <= half) & (ys <= half)))
        if cap is None or len(out.found) < cap:
            room = xs.size if cap is None else cap - len(out.found)
            for x, y in zip(xs[:room].tolist(), ys[:room].tolist()):
                x, y = int(x), int(y)
                out.found.append(SolutionTuple(x, y, tuple(evaluate_piece(p, x, y) for p in pattern.pieces)))
        if stop_after is not None and out.count_full - out.count_half >= stop_after:
            break
    return out


# -- public operations ---------------------------------------------------------

def enumerate_solutions(pattern: Pattern, N: int, cap: int | None = None) -> list[SolutionTuple]:
    """All (x, y) in [1..N]^2 where every piece is a positive integer, lexicographically."""
    if N < 1:
        raise ValueError("N must be >= 1")
    out: list[SolutionTuple] = []
    for x in range(1, N + 1):
        for y in range(1, N + 1):
            vals = [evaluate_piece(p, x, y) for p in pattern.pieces]
            if all(v is not None for v in vals):
                out.append(SolutionTuple(x, y, tuple(vals)))
                if cap is not None and len(out) >= cap:
                    return out
    return out


def is_monochromatic(sol: SolutionTuple, colouring: Colouring) -> bool:
    try:
        cols = {colouring.colour(v) for v in sol.values}
    except IndexError:
        return False
    return len(cols) == 1


def find_monochromatic(
    pattern: Pattern, colouring: Colouring, N: int, cap: int | None = None
) -> list[SolutionTuple]:
    """Solutions with x, y <= N whose values all share one colour.

    Tuples with a value outside an explicit colouring's range are skipped
    (they are counted as uncoverable by :func:`verify_blocking`).
    """
    return _scan(pattern, colouring, N, cap).found


def verify_blocking(pattern: Pattern, colouring: Colouring, N: int, cap: int = 20) -> BlockReport:
    """Count monochromatic solutions up to N//2 and N; the check passes when equal."""
    if N < 4:
        raise ValueError("verify_blocking needs N >= 4")
    s = _scan(pattern, colouring, N, cap)
    return BlockReport(pattern, colouring, N, s.count_half, s.count_full, tuple(s.found), s.uncoverable)


# -- blocking proposals --------------------------------------------------------

def _empty_root_primes(piece: BilinearPiece, bound: int) -> list[int]:
    out = []
    for p in primes_up_to(bound):
        try:
            roots = solve_fixedpoint_mod_p(*piece.coefficients, p)
        except SkipPrime:
            continue
        if not roots:
            out.append(p)
    return out


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


_SMALL_PRIMES = (3, 5, 7, 2)


def _smod_family(primes=_SMALL_PRIMES, Ks=(1, 2, 3, 4, 6)) -> list[Colouring]:
    out: list[Colouring] = []
    for p in primes:
        for K in Ks:
            if (p - 1) * K > 1:
                out.append(SmodVal(p, K))
            out.append(Product(ResidueMod(p), SmodVal(p, K)))
    return out


def _binlen_family() -> list[Colouring]:
    out: list[Colouring] = []
    for K in (2, 3, 4, 8, 16, 64):
        for s in (0, 1, 2, 3):
            out.append(BinLen(K, s))
    return out


def _proposals_for_bilinear3(piece: BilinearPiece, verdict: Verdict, bound: int) -> list[Colouring]:
    out: list[Colouring] = []
    if verdict.rule is Rule.THM_B_NO_T:
        out += [ResidueMod(p) for p in _empty_root_primes(piece, bound)]
    elif verdict.rule is Rule.THM_C_DIV and verdict.shift is not None:
        for p in _prime_factors(verdict.shift.denominator):
            out += [ResidueMod(p ** k) for k in (1, 2, 3)]
            out += [SmodVal(p, K) for K in (1, 2, 3)]
    elif verdict.rule is Rule.LHDN:
        # the obstruction lives at primes dividing the leading factor K
        K, _, _, _ = coprime_reduction(piece)
        for p in _prime_factors(abs(K)):
            for Kv in (2, 3, 1, 4):
                out += [Product(ResidueMod(p), SmodVal(p, Kv)), Product(ResidueMod(p * p), SmodVal(p, Kv))]
                if (p - 1) * Kv > 1:
                    out.append(SmodVal(p, Kv))
    return out


def _shifted_smod_family(piece: BilinearPiece, count: int = 3) -> list[Colouring]:
    """Certificates for x, y, x(cy+d), (cx+d)y: residue, smod/vp of x, and
    smod/vp of x + (d-1)/c, at primes not dividing c, d, d-1, d-2."""
    c, d = piece.c, piece.d if piece.e == 0 else piece.e
    shift = (d - 1) / c
    bad = [v for v in (c, d, d - 1, d - 2) if v != 0]
    out: list[Colouring] = []
    for p in primes_up_to(100):
        if any(v.numerator % p == 0 or v.denominator % p == 0 for v in bad) or shift.denominator % p == 0:
            continue
        modulus = p ** 12
        s = shift.numerator * pow(shift.denominator, -1, modulus) % modulus if shift.denominator != 1 else int(shift)
        for K in (1, 2):
            out.append(Product(Product(ResidueMod(p), SmodVal(p, K)), SmodVal(p, K, s)))
        if len(out) >= 2 * count:
            break
    return out


def propose_blocking(
    pattern: Pattern, verdict: Verdict | None = None, prime_bound: int = DEFAULT_PROPOSAL_PRIME_BOUND
) -> list[Colouring]:
    """Ordered candidate colourings for a NOT_PR pattern, most specific first.

    Residue colourings come from primes where the fixed-point congruence has
    no root; THM_C_DIV adds colourings at primes dividing the shift's
    denominator; sum/ratio obstructions get smod and binary-length families.
    Sub-patterns with their own certificates are searched too, since
    blocking a sub-pattern blocks the pattern. Residues mod 2..12 close the list.
    """
    verdict = verdict if verdict is not None else analyze(pattern)
    out: list[Colouring] = []
    bil = pattern.bilinear
    rule = verdict.rule
    if len(bil) == 1 and not pattern.linear and not pattern.ratios:
        out += _proposals_for_bilinear3(bil[0], verdict, prime_bound)
    if rule is Rule.QCD:
        (lin,) = pattern.linear
        smods = [SmodVal(p, 1) for p in (3, 5, 7)]
        if lin.cx != 1:
            out += smods
        if lin.cy != 1:
            out += _binlen_family()
        out += smods
    if rule in (Rule.LHDN, Rule.SUM_SHIFT, Rule.CO_QXY, Rule.THM_E_SHAPE,
                Rule.THM_F_CROSS, Rule.FIVE_PIECE, Rule.MANY_PIECE, Rule.QABQAB):
        if len(bil) >= 2 and not pattern.linear:
            for sub in sub_patterns(pattern):
                v = analyze(sub)
                if v.status is Status.NOT_PR and len(sub.bilinear) == 1:
                    out += _proposals_for_bilinear3(sub.bilinear[0], v, prime_bound)
        if rule is Rule.THM_F_CROSS and len(bil) == 2 and (bil[0].d == 0 or bil[0].e == 0):
            out += _shifted_smod_family(bil[0])
        out += _smod_family()
        if rule is Rule.QABQAB:
            out += _binlen_family()
    out += [ResidueMod(M) for M in range(2, 13)]
    seen, unique = set(), []
    for c in out:
        key = c.spec()
        if key not in seen:
            seen.add(key)
            unique.append(c)
    return unique


def auto_block(
    pattern: Pattern, N: int, verdict: Verdict | None = None, prime_bound: int = DEFAULT_PROPOSAL_PRIME_BOUND,
    limit: int | None = None, cap: int = 20,
) -> tuple[BlockReport | None, list[BlockReport]]:
    """First proposed colouring that passes ``verify_blocking`` at N, plus every report tried.

    Failing candidates are abandoned at their first solution beyond N//2, so
    their reports carry lower-bound counts (``complete=False``).
    """
    tried: list[BlockReport] = []
    candidates = propose_blocking(pattern, verdict, prime_bound)
    if limit is not None:
        candidates = candidates[:limit]
    for c in candidates:
        s = _scan(pattern, c, N, cap, stop_after=1)
        if s.count_full > s.count_half:
            tried.append(BlockReport(pattern, c, N, s.count_half, s.count_full, tuple(s.found), s.uncoverable, False))
            continue
        report = BlockReport(pattern, c, N, s.count_half, s.count_full, tuple(s.found), s.uncoverable)
        tried.append(report)
        return report, tried
    return None, tried
