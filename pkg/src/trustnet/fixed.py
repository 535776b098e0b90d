"""Fixed-point trust arithmetic.

Trust values are percentages with exactly two decimal digits in
[0.00, 100.00]. All intermediate arithmetic runs on exact rationals;
rounding is half-up at two decimals and happens only at operation
boundaries, so results are bit-identical across platforms.
"""

from __future__ import annotations

import math
from decimal import Decimal, InvalidOperation
from fractions import Fraction

from .errors import ValidationError

TWO_PLACES = Decimal("0.01")
FOUR_PLACES = Decimal("0.0001")

TRUST_MIN = Decimal("0.00")
TRUST_MAX = Decimal("100.00")
DEFAULT_TRUST = Decimal("50.00")

_HALF = Fraction(1, 2)


def parse_trust(value) -> Decimal:
    """Parse a trust percentage with at most two decimal places.

    Accepts str, int, Decimal, or float (floats must round-trip through
    their repr without exceeding two decimals, e.g. 55.0 or 56.02).
    """
    if isinstance(value, bool):
        raise ValidationError("trust value must be a number, not a boolean")
    if isinstance(value, Decimal):
        candidate = value
    elif isinstance(value, (int, float, str)):
        try:
            candidate = Decimal(str(value).strip() if isinstance(value, str) else str(value))
        except InvalidOperation:
            raise ValidationError(f"not a numeric trust value: {value!r}") from None
    else:
        raise ValidationError(f"unsupported trust value type: {type(value).__name__}")
    if not candidate.is_finite():
        raise ValidationError("trust value must be finite")
    quantized = candidate.quantize(TWO_PLACES)
    if quantized != candidate:
        raise ValidationError(f"trust value has more than two decimal places: {value}")
    if quantized < TRUST_MIN or quantized > TRUST_MAX:
        raise ValidationError(f"trust value out of range [0.00, 100.00]: {value}")
    return quantized


def round_trust(value: Fraction) -> Decimal:
    """Round a nonnegative exact rational half-up to two decimals."""
    cents = math.floor(value * 100 + _HALF)
    return Decimal(cents).scaleb(-2)


def clamp_round_trust(value: Fraction) -> Decimal:
    """Clamp into [0, 100] then round half-up to two decimals."""
    if value < 0:
        value = Fraction(0)
    elif value > 100:
        value = Fraction(100)
    return round_trust(value)


def trust_fraction(value: Decimal) -> Fraction:
    return Fraction(value)


def parse_coefficient(value) -> Fraction:
    """Parse a nonnegative coefficient with at most four decimal places."""
    if isinstance(value, bool):
        raise ValidationError("coefficient must be a number, not a boolean")
    if isinstance(value, Fraction):
        candidate = value
    else:
        try:
            candidate = Fraction(Decimal(str(value).strip() if isinstance(value, str) else str(value)))
        except (InvalidOperation, ValueError):
            raise ValidationError(f"not a numeric coefficient: {value!r}") from None
    if candidate < 0:
        raise ValidationError(f"coefficient must be nonnegative: {value}")
    if (candidate * 10_000).denominator != 1:
        raise ValidationError(f"coefficient has more than four decimal places: {value}")
    return candidate


def format_coefficient(value: Fraction) -> str:
    """Render a coefficient at exactly four decimal places."""
    return str(Decimal(int(value * 10_000)).scaleb(-4))
