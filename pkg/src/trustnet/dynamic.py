"""Dynamic trust: static trust plus coefficient-weighted activity counts.

The output is clamp(static + c_fav*n_fav + c_rt*n_rt + c_men*n_men
+ c_ff*n_ff + c_res*results_count, 0, 100), rounded half-up to two
decimals. Coefficients are administrator-owned and nonnegative.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, fields, replace
from decimal import Decimal
from fractions import Fraction
from typing import Callable

from .errors import AuthorizationError, ValidationError
from .fixed import (
    clamp_round_trust,
    format_coefficient,
    parse_coefficient,
    parse_trust,
    trust_fraction,
)

COEFFICIENT_NAMES = (
    "c_favorites",
    "c_retweets",
    "c_mentions",
    "c_fridayfollows",
    "c_results",
)


@dataclass(frozen=True)
class CoefficientSet:
    """Per-counter weights, in trust percent per event."""

    c_favorites: Fraction = Fraction(1, 4)
    c_retweets: Fraction = Fraction(1, 4)
    c_mentions: Fraction = Fraction(1, 4)
    c_fridayfollows: Fraction = Fraction(1, 4)
    c_results: Fraction = Fraction(1, 20)

    def __post_init__(self):
        for spec in fields(self):
            value = getattr(self, spec.name)
            if not isinstance(value, Fraction):
                object.__setattr__(self, spec.name, parse_coefficient(value))
            elif value < 0:
                raise ValidationError(f"{spec.name} must be nonnegative")

    def updated(self, values: dict) -> "CoefficientSet":
        """Return a copy with the named coefficients replaced."""
        unknown = set(values) - set(COEFFICIENT_NAMES)
        if unknown:
            raise ValidationError(f"unknown coefficients: {sorted(unknown)}")
        parsed = {name: parse_coefficient(value) for name, value in values.items()}
        return replace(self, **parsed)

    def as_strings(self) -> dict[str, str]:
        """All coefficients rendered at four decimals."""
        return {
            name: format_coefficient(getattr(self, name))
            for name in COEFFICIENT_NAMES
        }

    def to_config_text(self) -> str:
        return "".join(f"{k}={v}\n" for k, v in self.as_strings().items())

    @classmethod
    def from_config_text(cls, text: str) -> "CoefficientSet":
        """Parse flat `name=value` lines; blank lines and # comments allowed."""
        values: dict[str, str] = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValidationError(f"coefficient line {lineno}: expected name=value")
            name, _, value = line.partition("=")
            values[name.strip()] = value.strip()
        return cls().updated(values)


@dataclass(frozen=True)
class DynamicTrustInput:
    static_trust: Decimal
    n_favorites: int = 0
    n_retweets: int = 0
    n_mentions: int = 0
    n_fridayfollows: int = 0
    results_count: int = 0
    coefficients: CoefficientSet = CoefficientSet()

    def __post_init__(self):
        object.__setattr__(self, "static_trust", parse_trust(self.static_trust))
        for name in ("n_favorites", "n_retweets", "n_mentions",
                     "n_fridayfollows", "results_count"):
            count = getattr(self, name)
            if not isinstance(count, int) or isinstance(count, bool) or count < 0:
                raise ValidationError(f"{name} must be a nonnegative integer")


def compute_dynamic_trust(inp: DynamicTrustInput) -> Decimal:
    c = inp.coefficients
    total = trust_fraction(inp.static_trust)
    total += c.c_favorites * inp.n_favorites
    total += c.c_retweets * inp.n_retweets
    total += c.c_mentions * inp.n_mentions
    total += c.c_fridayfollows * inp.n_fridayfollows
    total += c.c_results * inp.results_count
    return clamp_round_trust(total)


class CoefficientStore:
    """Single-writer snapshot store for the live coefficient set.

    Writes are restricted to administrators via the injected predicate;
    readers get an immutable snapshot, so one search observes one set.
    """

    def __init__(
        self,
        initial: CoefficientSet | None = None,
        is_admin: Callable[[str], bool] = lambda user: False,
    ):
        self._current = initial or CoefficientSet()
        self._is_admin = is_admin
        self._lock = threading.Lock()

    def get(self) -> CoefficientSet:
        with self._lock:
            return self._current

    def set_coefficients(self, user: str, coefficients: CoefficientSet) -> CoefficientSet:
        if not self._is_admin(user):
            raise AuthorizationError("only an administrator may set coefficients")
        with self._lock:
            self._current = coefficients
            return self._current

    def restore(self, coefficients: CoefficientSet) -> None:
        """Load a persisted set without an admin principal (startup path)."""
        with self._lock:
            self._current = coefficients


__all__ = [
    "COEFFICIENT_NAMES",
    "CoefficientSet",
    "CoefficientStore",
    "DynamicTrustInput",
    "compute_dynamic_trust",
]
