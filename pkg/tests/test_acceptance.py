"""One test group per acceptance criterion; the summary prints PASS/FAIL per criterion."""

import random
from fractions import Fraction
from itertools import combinations, product

import pytest

from prpatterns.analyzer import Case, Rule, Status, analyze, find_t, shift_sigma
from prpatterns.arith import SkipPrime, legendre, primes_up_to, smod, solve_fixedpoint_mod_p, vp
from prpatterns.colourings import Explicit, ResidueMod
from prpatterns.parser import parse_pattern
from prpatterns.pattern import BilinearPiece, make_pattern, swap_xy
from prpatterns.search import auto_block, enumerate_solutions, is_monochromatic, propose_blocking, verify_blocking
from prpatterns.sequences import chain_product_sums, derive_sequences, product_sum_set, ratio_set
from prpatterns.witness import Unsat, Witness, constraint_sets, search_witness

PR, NOT, OPEN = Status.PR, Status.NOT_PR, Status.OPEN

# -- 1. golden verdict corpus ------------------------------------------------------

GOLDEN = (
    [
        ("x,y,x+y", PR, Rule.SCHUR),
        ("x,y,xy", PR, Rule.HINDMAN_PRODUCT),
        ("x,y,1/2xy", PR, Rule.QXY_PURE),
        ("x,y,3xy", PR, Rule.QXY_PURE),
        ("x,y,x+y,y/x", PR, Rule.THM_A_RATIO),
        ("x,y,x+y,3/2 y/x", PR, Rule.THM_A_RATIO),
        ("x,y,3x-2y,5y/x", NOT, Rule.QCD),
        ("x,y,xy,x(y+1)", PR, Rule.CO_QXY),
        ("x,y,x(18y+1)", PR, Rule.NLD_FAMILY),
        ("x,y,(x+1)(y+2)", NOT, Rule.THM_B_NO_T),
        ("x,y,(4x+1)(y+1)", NOT, Rule.THM_C_DIV),
    ]
    + [(f"x,y,1/{h}(x+{n})(y+{n})", NOT, Rule.THM_B_NO_T) for h in (1, 2, 3) for n in (1, 2, 3)]
    + [
        ("x,y,(x+1)(y+4)", OPEN, Rule.OPEN_Q61),
        ("2x,2y,3xy,x(3y+2)", PR, Rule.CO_QXY),
        ("2x,2y,3xy,x(3y-2)", NOT, Rule.CO_QXY),
        ("x,y,x(y+1),x(y+2)", NOT, Rule.THM_E_SHAPE),
        ("x,y,x(y+1),(x+2)y", NOT, Rule.THM_E_SHAPE),
    ]
    + [(f"x,y,x(y+{n}),(x+{n})y", NOT, Rule.THM_F_CROSS) for n in (3, 4, 5, 7)]
    + [(f"x,y,x(y+{n}),(x+{n})y", OPEN, Rule.OPEN_Q63) for n in (1, 2)]
    + [(f"x,y,{q}xy,{q}xy+x,{q}xy+y", OPEN, Rule.OPEN_Q63) for q in ("", "2", "1/3", "5")]
    + [
        ("x,y,xy,x(y+1),(x+1)y,(x+1)(y+1)", NOT, Rule.MANY_PIECE),
        ("x,y,xy,2xy,3xy,xy+x", NOT, Rule.MANY_PIECE),
        ("x,y,x(y+1),x(y+2),x(y+3),(x+5)(y+5)", NOT, Rule.MANY_PIECE),
        ("x,y,x+y,xy", OPEN, Rule.OPEN_SUM_PRODUCT),
        ("x,y,x+y,x(y+1)", OPEN, Rule.OPEN_Q64),
        ("x,y,x+y,x(y+2)", NOT, Rule.SUM_SHIFT),
        ("x,y,x+y,x(y-1)", NOT, Rule.SUM_SHIFT),
        ("x,y,x+y,x(y+5)", NOT, Rule.SUM_SHIFT),
    ]
)


@pytest.mark.acceptance(1, "golden verdict corpus")
@pytest.mark.parametrize("text,status,rule", GOLDEN)
def test_golden_verdicts(text, status, rule):
    v = analyze(parse_pattern(text))
    assert (v.status, v.rule) == (status, rule)


@pytest.mark.acceptance(1, "golden verdict corpus")
@pytest.mark.parametrize("q", ["", "2", "1/3", "5"])
def test_five_piece_records_c1_reduction(q):
    v = analyze(parse_pattern(f"x,y,{q}xy,{q}xy+x,{q}xy+y"))
    assert v.rules == (Rule.FIVE_PIECE, Rule.OPEN_Q63)
    assert v.canonical == make_pattern(BilinearPiece(1, 0, 0), BilinearPiece(1, 1, 0), BilinearPiece(1, 0, 1))


# -- 2. blocking certificates --------------------------------------------------------

CERTS = [("x,y,(x+1)(y+2)", 7), ("x,y,(4x+1)(y+1)", 2)]


@pytest.mark.acceptance(2, "blocking certificates at N = 10^5")
@pytest.mark.parametrize("text,M", CERTS)
def test_certificates_pass(text, M):
    r = verify_blocking(parse_pattern(text), ResidueMod(M), 10**5)
    assert (r.count_half, r.count_full) == (0, 0) and r.passed


@pytest.mark.acceptance(2, "blocking certificates at N = 10^5")
@pytest.mark.parametrize("text,M", CERTS)
def test_auto_mode_finds_certificates(text, M):
    p = parse_pattern(text)
    assert ResidueMod(M) in propose_blocking(p)
    report, _ = auto_block(p, 10**5)
    assert report is not None and report.passed and (report.count_half, report.count_full) == (0, 0)
    if M == 2:
        assert report.colouring == ResidueMod(2)


# -- 3. Schur at desk scale --------------------------------------------------------

SCHUR = parse_pattern("x,y,x+y")


@pytest.mark.acceptance(3, "Schur witness at N=4, Unsat at N=5")
def test_schur_witness_n4():
    w = search_witness(SCHUR, 2, 4)
    assert isinstance(w, Witness)
    sols = [s for s in enumerate_solutions(SCHUR, 4) if max(s.values) <= 4]
    assert not any(is_monochromatic(s, w.colouring) for s in sols)


@pytest.mark.acceptance(3, "Schur witness at N=4, Unsat at N=5")
def test_schur_unsat_n5_cross_checked():
    assert isinstance(search_witness(SCHUR, 2, 5), Unsat)
    sols = [s for s in enumerate_solutions(SCHUR, 5) if max(s.values) <= 5]
    for table in product(range(2), repeat=5):
        c = Explicit(5, table, 2)
        assert any(is_monochromatic(s, c) for s in sols), table
    # the DFS constraint sets agree with the enumeration route
    assert {frozenset(s.values) for s in sols} == set(constraint_sets(SCHUR, 5))


# -- 4. chain identities ----------------------------------------------------------

def _block_pairs(n: int):
    blocks = [c for k in range(1, n + 1) for c in combinations(range(1, n + 1), k)]
    return [(F, G) for F in blocks for G in blocks if F[-1] < G[0]]


def random_chain(rng: random.Random) -> list[int]:
    length = rng.randint(2, 5)
    z = [rng.randint(1, 1000)]
    while len(z) < length:
        room = 10**6 // z[-1]
        z.append(z[-1] * rng.randint(1, max(1, min(room, 40))))
    return z


@pytest.mark.acceptance(4, "chain identities on 100 random chains")
def test_chain_identities():
    rng = random.Random(20240611)
    for _ in range(100):
        zs = random_chain(rng)
        assert max(zs) <= 10**6
        d = derive_sequences(zs)
        assert product_sum_set(d.ys) == chain_product_sums(zs)
        rs = ratio_set(d.xs)
        pairs = [(F, G) for F, G, _ in rs.ratios] + rs.violations
        n = len(d.xs)
        assert len(pairs) == sum(1 for F, G in _block_pairs(n))
        for F, G in pairs:
            lhs = Fraction(sum(d.xs[i - 1] for i in G), sum(d.xs[i - 1] for i in F))
            # zs[i] is z_{i+1} for a 1-based index i
            assert lhs == Fraction(sum(zs[i] for i in G), sum(zs[i] for i in F))


# -- 5. analyzer properties --------------------------------------------------------

def _random_piece(rng: random.Random) -> BilinearPiece:
    q = Fraction(rng.randint(1, 6), rng.randint(1, 6))
    a, b = rng.randint(1, 4), rng.randint(1, 4)
    n, m = rng.randint(-6, 6), rng.randint(-6, 6)
    return BilinearPiece(q * a * b, q * a * m, q * b * n)


@pytest.mark.acceptance(5, "analyzer property suite")
def test_swap_symmetry_on_random_patterns():
    rng = random.Random(5)
    for _ in range(1000):
        p = make_pattern(*(_random_piece(rng) for _ in range(rng.randint(1, 3))))
        assert analyze(p).status is analyze(swap_xy(p)).status, p


def _brute_t() -> dict[tuple[int, int], list[tuple[Case, int]]]:
    table: dict[tuple[int, int], list[tuple[Case, int]]] = {}
    for t in range(-1000, 1001):
        table.setdefault((t * t, (t + 1) ** 2), []).append((Case.A, t))
        table.setdefault((t * (t - 1), t * (t + 1)), []).append((Case.B, t))
    return table


@pytest.mark.acceptance(5, "analyzer property suite")
def test_find_t_against_brute_force():
    table = _brute_t()
    matches = 0
    for d in range(-50, 51):
        for e in range(-50, 51):
            expected = table.get((d, e), [])
            assert len(expected) <= 1
            got = find_t(d, e)
            assert got == (expected[0] if expected else None), (d, e)
            if got is not None:
                matches += 1
                disc = (d + e - 1) ** 2 - 4 * d * e
                assert disc == (0 if got[0] is Case.A else 1)
    assert matches > 10


@pytest.mark.acceptance(5, "analyzer property suite")
def test_change_of_variables_identity():
    cs = [Fraction(1), Fraction(2), Fraction(1, 2), Fraction(5, 3), Fraction(18)]
    for d in range(-50, 51):
        for e in range(-50, 51):
            found = find_t(d, e)
            if found is None:
                continue
            case, t = found
            for c in cs:
                sigma, _ = shift_sigma(case, c, d, e)
                shift = t * (t + 1) if case is Case.A else t * t
                for x in (Fraction(0), Fraction(1), Fraction(7, 3), Fraction(-11)):
                    assert c * (x - sigma) - shift == c * x


# -- 6. arithmetic oracles ------------------------------------------------------------

def _naive_vp_smod(x: int, p: int) -> tuple[int, int]:
    digits, y = [], abs(x)
    while y:
        digits.append(y % p)
        y //= p
    k = next(i for i, dgt in enumerate(digits) if dgt)
    rest = abs(x) // p**k
    return k, (rest if x > 0 else -rest) % p


PRIMES_97 = primes_up_to(97)


@pytest.mark.acceptance(6, "arithmetic oracles for primes <= 97")
@pytest.mark.parametrize("p", PRIMES_97)
def test_vp_smod_oracle(p):
    # every residue at valuations 0..2, plus high powers of p times each unit
    xs = list(range(1, 3 * p * p + 1)) + list(range(-(p**2), 0))
    xs += [u * p**k for k in (3, 7, 20) for u in range(1, p)]
    for x in xs:
        assert (vp(x, p), smod(x, p)) == _naive_vp_smod(x, p), x


@pytest.mark.acceptance(6, "arithmetic oracles for primes <= 97")
@pytest.mark.parametrize("p", PRIMES_97[1:])
def test_legendre_oracle(p):
    squares = {s * s % p for s in range(1, p)}
    for a in range(-p, 2 * p):
        expected = 0 if a % p == 0 else (1 if a % p in squares else -1)
        assert legendre(a, p) == expected


FIXEDPOINT_PIECES = [
    (c, d, e)
    for c in (Fraction(1), Fraction(2), Fraction(1, 2), Fraction(3, 5))
    for d in range(-3, 4)
    for e in range(-3, 4)
]


@pytest.mark.acceptance(6, "arithmetic oracles for primes <= 97")
@pytest.mark.parametrize("p", PRIMES_97)
def test_fixedpoint_oracle(p):
    for c, d, e in FIXEDPOINT_PIECES:
        f = Fraction(d * e) / c
        try:
            got = solve_fixedpoint_mod_p(c, d, e, f, p)
        except SkipPrime:
            assert any(q.denominator % p == 0 for q in (c, Fraction(d), Fraction(e), f))
            continue
        brute = set()
        for r in range(p):
            val = c * r * r + (d + e) * r + f - r
            if val.numerator % p == 0:
                brute.add(r)
        assert got == brute, (c, d, e, p)
