"""Exact integer/rational arithmetic: p-adic valuation, smod, Legendre symbol
and the fixed-point congruence solver used by the analyzer and the search.

Rationals are :class:`fractions.Fraction`; they normalize eagerly, so two
equal rationals are always structurally equal.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from typing import Iterator, Union

Rational = Fraction
RationalLike = Union[int, Fraction]

DEFAULT_PRIME_BOUND = 10_000


class SkipPrime(ValueError):
    """Raised when a prime divides a denominator, so residues mod p are undefined."""


def as_rational(value: RationalLike | str) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not accepted; use int, Fraction or 'a/b' strings")
    return Fraction(value)


# Deterministic Miller-Rabin witnesses, valid for n < 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _require_prime(p: int) -> None:
    if not isinstance(p, int) or not is_prime(p):
        raise ValueError(f"{p!r} is not a prime")


@lru_cache(maxsize=8)
def _sieve(bound: int) -> tuple[int, ...]:
    if bound < 2:
        return ()
    flags = bytearray([1]) * (bound + 1)
    flags[0] = flags[1] = 0
    for i in range(2, isqrt(bound) + 1):
        if flags[i]:
            flags[i * i :: i] = bytearray(len(flags[i * i :: i]))
    return tuple(i for i, f in enumerate(flags) if f)


def primes_up_to(bound: int = DEFAULT_PRIME_BOUND) -> tuple[int, ...]:
    """All primes ``p <= bound`` (sieve of Eratosthenes)."""
    return _sieve(bound)


def iter_primes(bound: int = DEFAULT_PRIME_BOUND) -> Iterator[int]:
    return iter(primes_up_to(bound))


def vp(x: int, p: int) -> int:
    """Largest k with p**k dividing x."""
    if x == 0:
        raise ValueError("vp(0) is undefined")
    _require_prime(p)
    x = abs(x)
    k = 0
    while x % p == 0:
        x //= p
        k += 1
    return k


def smod(x: int, p: int) -> int:
    """Least significant nonzero base-p digit of x, as a residue in [1, p-1].

    Equivalently ``(x / p**vp(x, p)) mod p``; multiplicative in x.
    """
    if x == 0:
        raise ValueError("smod(0) is undefined")
    _require_prime(p)
    while x % p == 0:
        x //= p
    return x % p


def is_perfect_square(x: int) -> int | None:
    """Return s >= 0 with s*s == x, or None."""
    if x < 0:
        return None
    s = isqrt(x)
    return s if s * s == x else None


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) for an odd prime p, via Euler's criterion."""
    if p == 2:
        raise ValueError("legendre symbol needs an odd prime")
    _require_prime(p)
    ls = pow(a % p, (p - 1) // 2, p)
    return -1 if ls == p - 1 else ls


def sqrt_mod(a: int, p: int) -> int | None:
    """A square root of a modulo the prime p (Tonelli-Shanks), or None."""
    a %= p
    if a == 0 or p == 2:
        return a
    if legendre(a, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while legendre(z, p) != -1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def residue(q: RationalLike, p: int) -> int:
    """Class of the rational ``k/h`` in F_p, i.e. ``k * h^-1 mod p``."""
    q = as_rational(q)
    if q.denominator % p == 0:
        raise SkipPrime(f"p={p} divides the denominator of {q}")
    return q.numerator * pow(q.denominator, -1, p) % p


def lcm(*values: int) -> int:
    out = 1
    for v in values:
        out = out * v // gcd(out, v)
    return out


def solve_fixedpoint_mod_p(
    c: RationalLike, d: RationalLike, e: RationalLike, f: RationalLike, p: int
) -> frozenset[int]:
    """All r in F_p with ``r = c r^2 + (d+e) r + f``.

    This is the congruence a common residue class of x and y must satisfy
    for the pattern x, y, cxy + dx + ey + f to be monochromatic mod p.
    Odd primes go through the discriminant ``(d+e-1)^2 - 4cf``.
    """
    _require_prime(p)
    A, B, C = (residue(c, p), residue(as_rational(d) + as_rational(e) - 1, p), residue(f, p))
    if p == 2:
        return frozenset(r for r in range(2) if (A * r * r + B * r + C) % 2 == 0)
    if A == 0:
        if B == 0:
            return frozenset(range(p)) if C == 0 else frozenset()
        return frozenset({-C * pow(B, -1, p) % p})
    disc = (B * B - 4 * A * C) % p
    if disc != 0 and legendre(disc, p) == -1:
        return frozenset()
    s = sqrt_mod(disc, p)
    inv = pow(2 * A, -1, p)
    return frozenset({(-B + s) * inv % p, (-B - s) * inv % p})
