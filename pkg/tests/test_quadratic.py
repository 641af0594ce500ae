from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dedekind_symbols.quadratic import QuadVal, format_rational, is_squarefree, parse_rational, qsign

fractions = st.fractions(min_value=-50, max_value=50, max_denominator=40)
discs = st.sampled_from([2, 3, 5, 6, 7, 37])


def test_qsign_examples():
    assert qsign(QuadVal(0, 0, 2)) == 0
    assert qsign(QuadVal(1, -1, 2)) == -1
    assert qsign(QuadVal(3, -2, 2)) == 1


@given(fractions, fractions, discs)
def test_qsign_matches_high_precision_float(x, y, D):
    v = QuadVal(x, y, D)
    with mpmath.workdps(60):
        ref = mpmath.mpf(x.numerator) / x.denominator + mpmath.mpf(y.numerator) / y.denominator * mpmath.sqrt(D)
        expected = 0 if ref == 0 else (1 if ref > 0 else -1)
    assert qsign(v) == expected


@given(fractions, fractions, fractions, fractions, discs)
def test_field_operations_agree_with_floats(x1, y1, x2, y2, D):
    u, v = QuadVal(x1, y1, D), QuadVal(x2, y2, D)
    fu, fv = float(u), float(v)
    assert float(u + v) == pytest.approx(fu + fv, abs=1e-9)
    assert float(u * v) == pytest.approx(fu * fv, rel=1e-9, abs=1e-9)
    if qsign(v) != 0:
        assert (u / v) * v == u


def test_sqrt_squares_to_integer():
    r = QuadVal.sqrt(37)
    assert r * r == 37
    assert qsign(r - 6) == 1 and qsign(r - 7) == -1


def test_D_one_folds_into_rational_part():
    v = QuadVal(2, 3, 1)
    assert v.y == 0 and v.x == 5
    assert v == 5


def test_non_squarefree_discriminant_rejected():
    assert not is_squarefree(12)
    with pytest.raises(ValueError):
        QuadVal(0, 1, 12)


@given(fractions)
def test_rational_text_round_trip(x):
    assert parse_rational(format_rational(x)) == x


def test_rational_format_is_p_over_q():
    assert format_rational(Fraction(0)) == "0/1"
    assert format_rational(Fraction(-6, 4)) == "-3/2"
    assert format_rational(5) == "5/1"


def test_mixed_discriminants_rejected():
    with pytest.raises(ValueError):
        QuadVal(0, 1, 2) + QuadVal(0, 1, 3)
