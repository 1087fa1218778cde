from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from katzflat import ParseError, parse_series
from katzflat.series import TruncatedSeries

from conftest import ring_shapes, series


def test_three_term_series():
    f = parse_series("1 + 2*x1*x2^3 - 1/3*x3", 3, 4)
    assert f.terms == {(0, 0, 0): 1, (1, 3, 0): 2, (0, 0, 1): Fraction(-1, 3)}
    assert f.precision == 4


def test_high_powers_truncate_silently():
    assert parse_series("x1^99", 1, 4).is_zero()
    assert parse_series("x1^2*x2^3", 2, 4).is_zero()


def test_unbalanced_parenthesis_offset():
    with pytest.raises(ParseError) as info:
        parse_series("x1*(x2", 2, 4)
    assert info.value.offset == 6


@pytest.mark.parametrize(
    "text, offset",
    [
        ("x3", 0),
        ("1 + x0", 4),
        ("1 +", 3),
        ("2 $ x1", 2),
        ("1/0", 2),
        ("x1 x2", 3),
        ("", 0),
    ],
)
def test_syntax_errors_carry_positions(text, offset):
    with pytest.raises(ParseError) as info:
        parse_series(text, 2, 3)
    assert info.value.offset == offset


def test_rational_sign_and_subtraction():
    assert parse_series("-3/4 - x1", 1, 2) == TruncatedSeries(1, 2, {(0,): Fraction(-3, 4), (1,): -1})
    assert parse_series("x1 - -2", 1, 2) == parse_series("2 + x1", 1, 2)


def test_parentheses_and_products():
    assert parse_series("(1 + x1)*(1 - x1)", 1, 3) == parse_series("1 - x1^2", 1, 3)
    assert parse_series(" ( x1 + x2 ) * x1 ", 2, 3) == parse_series("x1^2+x1*x2", 2, 3)


def test_format_examples():
    assert parse_series("0", 2, 3).format() == "0"
    assert parse_series("x2 - 1/2*x1^2 + 3", 2, 3).format() == "3 + x2 - 1/2*x1^2"
    assert parse_series("-x1", 1, 3).format() == "-x1"


@settings(max_examples=100, deadline=None)
@given(st.data(), ring_shapes)
def test_format_parse_round_trip(data, shape):
    n, d = shape
    f = data.draw(series(n, d))
    assert parse_series(f.format(), n, d).terms == f.terms
