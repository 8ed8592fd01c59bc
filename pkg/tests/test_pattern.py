from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from prpatterns.pattern import (
    BilinearPiece,
    FactoredPiece,
    Linear,
    NotSymmetricError,
    PatternError,
    Ratio,
    X,
    Y,
    canonical_piece,
    evaluate_piece,
    factor_bilinear,
    make_pattern,
    render_factored,
    swap_piece,
    swap_xy,
    to_bilinear,
)


@pytest.mark.parametrize(
    "args,cde",
    [((Fraction(1, 2), 2, 2, 0, 1), (2, 1, 0)), ((1, 4, 1, 1, 1), (4, 4, 1)), ((1, 1, 1, 0, 1), (1, 1, 0))],
)
def test_to_bilinear(args, cde):
    assert to_bilinear(*args) == BilinearPiece(*cde)


@pytest.mark.parametrize(
    "cde,expected",
    [
        ((2, 1, 0), FactoredPiece(Fraction(1, 2), 2, 0, 2, 1)),
        ((1, 2, 1), FactoredPiece(Fraction(1), 1, 1, 1, 2)),
        ((1, 0, 0), FactoredPiece(Fraction(1), 1, 0, 1, 0)),
    ],
)
def test_factor_bilinear(cde, expected):
    assert factor_bilinear(BilinearPiece(*cde)) == expected


def test_factored_k_h():
    fp = factor_bilinear(BilinearPiece(2, 1, 0))
    assert (fp.k, fp.h) == (1, 2)


@pytest.mark.parametrize("cde,out", [((4, 4, 1), (1, 4, 1)), ((1, 1, 0), (1, 1, 0)), ((2, 1, 0), (1, 1, 0))])
def test_canonical_piece(cde, out):
    assert canonical_piece(BilinearPiece(*cde)) == BilinearPiece(*out)


def test_evaluate_examples():
    assert evaluate_piece(BilinearPiece(1, 2, 1), 3, 4) == 24
    assert evaluate_piece(Ratio(5), 2, 6) == 15
    assert evaluate_piece(Ratio(1), 4, 6) is None


def test_evaluate_rejects_non_positive_and_fractional():
    # (x-3)(y-3)
    assert evaluate_piece(BilinearPiece(1, -3, -3), 3, 7) is None
    assert evaluate_piece(BilinearPiece(1, -3, -3), 2, 5) is None
    assert evaluate_piece(BilinearPiece(1, -3, -3), 2, 2) == 1
    assert evaluate_piece(BilinearPiece(Fraction(1, 2), 0, 0), 1, 3) is None
    assert evaluate_piece(Linear(3, -2), 1, 2) is None
    assert evaluate_piece(Ratio(Fraction(3, 2)), 2, 2) is None  # 3/2 * 1


def test_ratio_needs_divisibility_even_when_value_is_integral():
    # 2 * 3/2 = 3 is an integer, but 2 does not divide 3
    assert evaluate_piece(Ratio(2), 2, 3) is None


def test_swap_examples():
    assert swap_xy(make_pattern(BilinearPiece(1, 2, 1))) == make_pattern(BilinearPiece(1, 1, 2))
    cross = make_pattern(BilinearPiece(1, 1, 0), BilinearPiece(1, 0, 1))
    assert swap_xy(cross) == cross
    with pytest.raises(NotSymmetricError):
        swap_xy(make_pattern(Ratio(1)))


def test_invalid_pieces():
    with pytest.raises(PatternError):
        BilinearPiece(0, 1, 1)
    with pytest.raises(PatternError):
        Linear(0, 0)
    with pytest.raises(PatternError):
        Ratio(0)


def test_render_factored():
    assert render_factored(BilinearPiece(1, 2, 1)) == "(x+1)(y+2)"
    assert render_factored(BilinearPiece(18, 1, 0)) == "x(18y+1)"


q = st.builds(Fraction, st.integers(1, 12), st.integers(1, 12))
pos = st.integers(1, 6)
shift = st.integers(-8, 8)


@given(q, pos, pos, shift, shift, pos, pos)
def test_to_bilinear_rescaling_invariance(qq, a, b, n, m, u, v):
    assert to_bilinear(qq, a, b, n, m) == to_bilinear(qq / (u * v), u * a, v * b, u * n, v * m)


@given(q, pos, pos, shift, shift)
def test_factor_round_trip_and_rank_one(qq, a, b, n, m):
    piece = to_bilinear(qq, a, b, n, m)
    fp = factor_bilinear(piece)
    assert to_bilinear(fp.q, fp.a, fp.b, fp.n, fp.m) == piece
    assert piece.c * piece.f == piece.d * piece.e
    assert canonical_piece(canonical_piece(piece)) == canonical_piece(piece)


@given(q, pos, pos, shift, shift, st.integers(1, 50), st.integers(1, 50))
def test_value_matches_factored_form(qq, a, b, n, m, x, y):
    piece = to_bilinear(qq, a, b, n, m)
    exact = qq * (a * x + n) * (b * y + m)
    assert piece.value(x, y) == exact
    v = evaluate_piece(piece, x, y)
    if exact > 0 and exact.denominator == 1:
        assert v == exact
    else:
        assert v is None


@given(st.one_of(st.just(X), st.just(Y), st.builds(Linear, st.integers(1, 5), st.integers(-5, 5))), pos, pos)
def test_swap_evaluation_simple(piece, x, y):
    assert evaluate_piece(swap_piece(piece), x, y) == evaluate_piece(piece, y, x)


@given(q, pos, pos, shift, shift, st.integers(1, 40), st.integers(1, 40))
def test_swap_evaluation_bilinear(qq, a, b, n, m, x, y):
    piece = to_bilinear(qq, a, b, n, m)
    assert evaluate_piece(swap_piece(piece), x, y) == evaluate_piece(piece, y, x)
