"""Lexicon polarity classification and pheromone-based polarity forecasting.

A post is positive, negative, or no-opinion by comparing the relative
frequencies of lexicon words among its tokens. The forecaster keeps one
pheromone accumulator per polarity class: every observation evaporates all
accumulators by a fixed rate and deposits onto the observed class; the
prediction is the argmax, with ties reading as no opinion.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from enum import Enum

from .errors import ValidationError
from .text import tokenize

EVAPORATION_RATE = 0.1
DEPOSIT = 1.0


class Polarity(str, Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    NO_OPINION = "no_opinion"


def normalize_word(word: str) -> str:
    """Lexicon entries are lowercase with punctuation stripped."""
    if not isinstance(word, str):
        raise ValidationError("lexicon word must be a string")
    cleaned = "".join(ch for ch in word.lower() if ch.isalnum())
    if not cleaned:
        raise ValidationError(f"lexicon word has no alphanumeric content: {word!r}")
    return cleaned


@dataclass(frozen=True)
class Lexicon:
    positive_words: frozenset[str]
    negative_words: frozenset[str]

    def __post_init__(self):
        overlap = self.positive_words & self.negative_words
        if overlap:
            raise ValidationError(f"lexicon words in both classes: {sorted(overlap)}")

    @classmethod
    def from_words(cls, positive, negative) -> "Lexicon":
        return cls(
            positive_words=frozenset(normalize_word(w) for w in positive),
            negative_words=frozenset(normalize_word(w) for w in negative),
        )

    @classmethod
    def empty(cls) -> "Lexicon":
        return cls(frozenset(), frozenset())

    @classmethod
    def from_text(cls, text: str) -> "Lexicon":
        """Parse two-column lines: `word<TAB>+` or `word<TAB>-`."""
        positive, negative = [], []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2 or parts[1] not in ("+", "-"):
                raise ValidationError(
                    f"lexicon line {lineno}: expected word<TAB>+ or word<TAB>-"
                )
            (positive if parts[1] == "+" else negative).append(parts[0])
        return cls.from_words(positive, negative)


def classify(text: str, lexicon: Lexicon) -> Polarity:
    """Polarity by relative token frequency against the lexicon.

    With equal positive and negative frequencies (including empty text)
    the result is no opinion.
    """
    tokens = tokenize(text)
    positive = sum(1 for t in tokens if t in lexicon.positive_words)
    negative = sum(1 for t in tokens if t in lexicon.negative_words)
    if positive > negative:
        return Polarity.POSITIVE
    if negative > positive:
        return Polarity.NEGATIVE
    return Polarity.NO_OPINION


class PheromoneTable:
    """Per-polarity accumulators with evaporation-plus-deposit updates."""

    def __init__(self, rho: float = EVAPORATION_RATE, deposit: float = DEPOSIT):
        if not 0.0 <= rho < 1.0:
            raise ValidationError("evaporation rate must be in [0, 1)")
        if deposit <= 0.0:
            raise ValidationError("deposit must be positive")
        self.rho = rho
        self.deposit = deposit
        self.tau: dict[Polarity, float] = {p: 0.0 for p in Polarity}
        self.observations = 0

    def observe(self, polarity: Polarity) -> None:
        if not isinstance(polarity, Polarity):
            raise ValidationError(f"not a polarity: {polarity!r}")
        for p in self.tau:
            self.tau[p] *= 1.0 - self.rho
        self.tau[polarity] += self.deposit
        self.observations += 1

    def predict(self) -> Polarity:
        best = max(self.tau.values())
        leaders = [p for p, level in self.tau.items() if level == best]
        if len(leaders) != 1:
            return Polarity.NO_OPINION
        return leaders[0]

    def to_json(self) -> dict:
        return {
            "tau": {p.value: f"{self.tau[p]:.6f}" for p in Polarity},
            "prediction": self.predict().value,
            "observations": self.observations,
        }


class ForecastBoard:
    """One pheromone table per stream; updates serialized per board."""

    def __init__(self, rho: float = EVAPORATION_RATE, deposit: float = DEPOSIT):
        self.rho = rho
        self.deposit = deposit
        self._tables: dict[str, PheromoneTable] = {}
        self._lock = threading.Lock()

    def observe(self, stream: str, polarity: Polarity) -> None:
        with self._lock:
            table = self._tables.get(stream)
            if table is None:
                table = self._tables[stream] = PheromoneTable(self.rho, self.deposit)
            table.observe(polarity)

    def report(self, stream: str) -> dict:
        """Forecast for a stream; unknown streams read as fresh tables."""
        with self._lock:
            table = self._tables.get(stream)
            if table is None:
                table = PheromoneTable(self.rho, self.deposit)
            payload = table.to_json()
        payload["stream"] = stream
        return payload

    def streams(self) -> frozenset[str]:
        with self._lock:
            return frozenset(self._tables)


__all__ = [
    "DEPOSIT",
    "EVAPORATION_RATE",
    "ForecastBoard",
    "Lexicon",
    "PheromoneTable",
    "Polarity",
    "classify",
    "normalize_word",
]
