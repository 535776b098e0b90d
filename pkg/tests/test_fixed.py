from decimal import Decimal
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from trustnet.errors import ValidationError
from trustnet.fixed import (
    clamp_round_trust,
    format_coefficient,
    parse_coefficient,
    parse_trust,
    round_trust,
)


def test_parse_trust_accepts_ints_strings_decimals():
    assert parse_trust(99) == Decimal("99.00")
    assert parse_trust("55") == Decimal("55.00")
    assert parse_trust("56.02") == Decimal("56.02")
    assert parse_trust(Decimal("0")) == Decimal("0.00")
    assert str(parse_trust("55")) == "55.00"


@pytest.mark.parametrize("bad", ["100.01", -1, "55.555", "abc", float("nan"), None, True])
def test_parse_trust_rejects(bad):
    with pytest.raises(ValidationError):
        parse_trust(bad)


def test_round_trust_half_up():
    assert round_trust(Fraction(99, 16)) == Decimal("6.19")  # 6.1875
    assert round_trust(Fraction(1, 8)) == Decimal("0.13")   # 0.125 rounds up
    assert round_trust(Fraction(2675, 1000)) == Decimal("2.68")
    assert round_trust(Fraction(0)) == Decimal("0.00")


def test_clamp_round_trust():
    assert clamp_round_trust(Fraction(550)) == Decimal("100.00")
    assert clamp_round_trust(Fraction(-3)) == Decimal("0.00")
    assert clamp_round_trust(Fraction(5602, 100)) == Decimal("56.02")


@given(st.integers(min_value=0, max_value=10_000))
def test_trust_string_round_trip_is_bit_exact(cents):
    value = Decimal(cents).scaleb(-2)
    assert parse_trust(str(value)) == value
    assert str(parse_trust(str(value))) == str(value)


def test_coefficients_four_decimals():
    assert parse_coefficient("0.25") == Fraction(1, 4)
    assert format_coefficient(Fraction(1, 4)) == "0.2500"
    assert format_coefficient(Fraction(9, 100)) == "0.0900"
    with pytest.raises(ValidationError):
        parse_coefficient("-0.1")
    with pytest.raises(ValidationError):
        parse_coefficient("0.00001")
