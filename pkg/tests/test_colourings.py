import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from prpatterns.arith import primes_up_to, smod, vp
from prpatterns.colourings import (
    BinLen,
    ColouringRangeError,
    Explicit,
    FormatError,
    Product,
    ResidueMod,
    SmodVal,
    SpecError,
    colour_of,
    load_colouring,
    parse_colouring_spec,
    parse_explicit,
    save_colouring,
)


def test_colour_examples():
    assert colour_of(ResidueMod(7), 23) == 2
    assert colour_of(SmodVal(3, 2), 18) == (2 - 1) * 2 + 0
    assert colour_of(BinLen(3, 0), 12) == 1


def test_counts():
    assert ResidueMod(5).count == 5
    assert SmodVal(5, 3).count == 12
    assert BinLen(4, 2).count == 16
    assert Product(ResidueMod(3), SmodVal(5, 2)).count == 24


def test_invalid_parameters():
    for bad in (lambda: ResidueMod(1), lambda: SmodVal(4), lambda: SmodVal(3, 0), lambda: BinLen(0)):
        with pytest.raises(ValueError):
            bad()
    with pytest.raises(ValueError):
        ResidueMod(3).colour(0)


@pytest.mark.parametrize("p", primes_up_to(97))
def test_smodval_matches_recomputation(p):
    K = 3
    c = SmodVal(p, K)
    xs = np.arange(1, 3000, dtype=np.int64)
    vec = c.colours(xs)
    for x in range(1, 3000):
        expected = (smod(x, p) - 1) * K + vp(x, p) % K
        assert c.colour(x) == expected == vec[x - 1]


def test_shifted_smodval():
    c = SmodVal(5, 1, 3)
    assert c.colour(2) == (smod(5, 5) - 1)
    assert c.colour(7) == smod(10, 5) - 1
    assert SmodVal(5, 1, -4).colour(4) == 0  # x + shift = 0
    assert list(c.colours(np.array([2, 7]))) == [c.colour(2), c.colour(7)]


def test_binlen_lengths():
    xs = np.arange(1, 1 << 20, dtype=np.int64)
    c = BinLen(1 << 30, 0)  # colour is L itself
    L = c.colours(xs)
    assert np.all((1 << (L - 1)) <= xs) and np.all(xs < (1 << L))


@given(st.integers(1, 10**30), st.integers(1, 8), st.integers(0, 4))
def test_binlen_scalar_vs_vector(x, K, s):
    c = BinLen(K, s)
    L = x.bit_length()
    lead = format(x, "b")[:s].ljust(s, "0")
    expected = (L % K) * (1 << s) + (int(lead, 2) if s else 0)
    assert c.colour(x) == expected
    if x < 1 << 62:
        assert c.colours(np.array([x], dtype=np.int64))[0] == expected
    assert c.colours(np.array([x], dtype=object))[0] == expected


@given(st.integers(1, 10**6))
def test_product_projects(x):
    left, right = ResidueMod(6), SmodVal(5, 2)
    prod = Product(left, right)
    assert prod.split(prod.colour(x)) == (left.colour(x), right.colour(x))
    assert 0 <= prod.colour(x) < prod.count


def test_vectorized_forms_agree():
    xs = np.arange(1, 5000, dtype=np.int64)
    for c in (ResidueMod(6), SmodVal(3, 2), BinLen(3, 2), Product(ResidueMod(4), BinLen(2, 1)),
              Product(Product(ResidueMod(5), SmodVal(5, 1)), SmodVal(5, 2, 3))):
        assert list(c.colours(xs)) == [c.colour(int(x)) for x in xs]


def test_residue_modulus_and_part():
    assert ResidueMod(6).residue_modulus() == 6
    assert SmodVal(3).residue_modulus() is None
    assert Product(ResidueMod(4), ResidueMod(6)).residue_modulus() == 12
    assert Product(ResidueMod(4), SmodVal(3)).residue_part() == ResidueMod(4)
    assert Product(BinLen(2), SmodVal(3)).residue_part() is None


def test_factor_state_determines_product_colour():
    # colour(A*B/g) must be a function of the states of A and B
    rng = np.random.default_rng(7)
    for c in (ResidueMod(6), SmodVal(3, 2), SmodVal(2, 3), Product(ResidueMod(4), SmodVal(2, 2))):
        for g in (1, 2, 6):
            A = rng.integers(1, 10**5, 4000)
            Bv = rng.integers(1, 10**5, 4000)
            ok = (A * Bv) % g == 0
            A, Bv = A[ok], Bv[ok]
            sa, _ = c.factor_state(A, g)
            sb, _ = c.factor_state(Bv, g)
            seen = {}
            for a, b, x, y in zip(sa.tolist(), sb.tolist(), A.tolist(), Bv.tolist()):
                col = c.colour(x * y // g)
                assert seen.setdefault((a, b), col) == col
    assert SmodVal(3, 1, 2).factor_state(np.array([1]), 1) is None
    assert BinLen(2).factor_state(np.array([1]), 1) is None


def test_explicit():
    e = Explicit(4, (0, 1, 1, 0), 2)
    assert [e.colour(x) for x in range(1, 5)] == [0, 1, 1, 0]
    with pytest.raises(ColouringRangeError):
        e.colour(5)
    assert list(e.colours(np.array([0, 1, 4, 5]))) == [-1, 0, 0, -1]
    assert e == Explicit(4, [0, 1, 1, 0], 2) and hash(e) == hash(Explicit(4, [0, 1, 1, 0], 2))
    assert Explicit.from_function(ResidueMod(3), 5).table == (1, 2, 0, 1, 2)
    with pytest.raises(ValueError):
        Explicit(3, (0, 1), 2)
    with pytest.raises(ValueError):
        Explicit(2, (0, 2), 2)


def test_file_round_trip(tmp_path):
    path = tmp_path / "c.txt"
    path.write_text("4 2\n0 1 1 0\n")
    e = load_colouring(path)
    assert (e.N, e.r, e.table) == (4, 2, (0, 1, 1, 0))
    big = Explicit.from_function(Product(ResidueMod(3), SmodVal(5)), 101)
    save_colouring(big, tmp_path / "big.txt")
    assert load_colouring(tmp_path / "big.txt") == big
    assert parse_colouring_spec(f"file:{path}") == e


@pytest.mark.parametrize(
    "lines,line",
    [(["4 2", "0 1 2 0"], 2), ([], 1), (["4"], 1), (["3 2", "0 1", "1 x"], 3), (["2 2", "0 1 1"], 2),
     (["3 2", "0 1"], 2)],
)
def test_format_errors_report_lines(lines, line):
    with pytest.raises(FormatError) as info:
        parse_explicit(lines)
    assert info.value.line == line


@pytest.mark.parametrize(
    "spec",
    ["mod:7", "smodval:3:2", "smodval:5:1:3", "binlen:3:1", "prod:(mod:2,smodval:3:1)",
     "prod:(prod:(mod:5,smodval:5:1),smodval:5:1:2)"],
)
def test_spec_round_trip(spec):
    assert parse_colouring_spec(spec).spec() == spec


def test_spec_shorthands_and_errors():
    assert parse_colouring_spec("smodval:3") == SmodVal(3, 1)
    assert parse_colouring_spec("binlen:4") == BinLen(4, 0)
    for bad in ("mod:", "mod:1", "smodval:4:1", "hue:3", "prod:(mod:2)", "prod:mod:2,mod:3", "mod:2:3"):
        with pytest.raises(SpecError):
            parse_colouring_spec(bad)
