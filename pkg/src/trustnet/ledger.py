"""Append-only store of timestamped interaction events.

Counters are computed over a sliding one-year window: an event at time t
counts for a query at `as_of` iff  as_of - 365 days < t <= as_of. Events
may arrive out of order; exact duplicates (same actor, contact, kind,
post id, timestamp) collapse to one.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from enum import Enum
from fractions import Fraction
from typing import Callable

from .errors import NotFoundError, ValidationError

WINDOW = timedelta(days=365)


class EventKind(str, Enum):
    FAVORITE = "favorite"
    RETWEET = "retweet"
    MENTION = "mention"
    FRIDAY_FOLLOW = "friday_follow"
    LIKE = "like"
    DISLIKE = "dislike"
    COMMENT = "comment"
    SHARE = "share"
    PRIVATE_MESSAGE = "private_message"

    @classmethod
    def parse(cls, name: str) -> "EventKind":
        for kind in cls:
            if kind.value == name:
                return kind
        raise ValidationError(f"unknown event kind: {name!r}")


def normalize_timestamp(at: datetime) -> datetime:
    """Coerce to UTC at second precision. Naive datetimes are taken as UTC."""
    if not isinstance(at, datetime):
        raise ValidationError("timestamp must be a datetime")
    if at.tzinfo is None:
        at = at.replace(tzinfo=timezone.utc)
    return at.astimezone(timezone.utc).replace(microsecond=0)


def parse_timestamp(value: str) -> datetime:
    """Parse ISO-8601 (`2012-05-01T12:00:00Z` or explicit offset)."""
    if not isinstance(value, str):
        raise ValidationError("timestamp must be a string")
    raw = value.strip()
    if raw.endswith("Z"):
        raw = raw[:-1] + "+00:00"
    try:
        parsed = datetime.fromisoformat(raw)
    except ValueError:
        raise ValidationError(f"invalid timestamp: {value!r}") from None
    return normalize_timestamp(parsed)


def format_timestamp(at: datetime) -> str:
    return normalize_timestamp(at).strftime("%Y-%m-%dT%H:%M:%SZ")


@dataclass(frozen=True)
class ActivityEvent:
    """One interaction between an actor and a contact, immutable."""

    actor: str
    contact: str
    kind: EventKind
    at: datetime
    post_id: str | None = None

    def __post_init__(self):
        if self.actor == self.contact:
            raise ValidationError("event actor and contact must differ")
        if not isinstance(self.kind, EventKind):
            object.__setattr__(self, "kind", EventKind.parse(self.kind))
        object.__setattr__(self, "at", normalize_timestamp(self.at))

    @property
    def key(self) -> tuple:
        return (self.actor, self.contact, self.kind.value, self.post_id, self.at)

    def to_json(self) -> dict:
        record = {
            "actor": self.actor,
            "contact": self.contact,
            "kind": self.kind.value,
            "at": format_timestamp(self.at),
        }
        if self.post_id is not None:
            record["post_id"] = self.post_id
        return record

    @classmethod
    def from_json(cls, record: dict) -> "ActivityEvent":
        if not isinstance(record, dict):
            raise ValidationError("event must be a JSON object")
        unknown = set(record) - {"actor", "contact", "kind", "post_id", "at"}
        if unknown:
            raise ValidationError(f"unknown event fields: {sorted(unknown)}")
        for required in ("actor", "contact", "kind", "at"):
            if required not in record:
                raise ValidationError(f"event missing field: {required}")
        post_id = record.get("post_id")
        if post_id is not None and not isinstance(post_id, str):
            raise ValidationError("post_id must be a string")
        return cls(
            actor=record["actor"],
            contact=record["contact"],
            kind=EventKind.parse(record["kind"]),
            at=parse_timestamp(record["at"]),
            post_id=post_id,
        )


@dataclass
class IngestReport:
    """Outcome of a line-oriented ingest; rejected lines keep their numbers."""

    accepted: int = 0
    duplicates: int = 0
    rejected: list[tuple[int, str]] = field(default_factory=list)


def in_window(at: datetime, as_of: datetime) -> bool:
    return as_of - WINDOW < at <= as_of


class ActivityLedger:
    """Thread-safe append-only event store with windowed counters."""

    def __init__(self, user_exists: Callable[[str], bool]):
        self._user_exists = user_exists
        self._events: list[ActivityEvent] = []
        self._seen: set[tuple] = set()
        self._by_key: dict[tuple[str, str, str], list[datetime]] = {}
        self._lock = threading.Lock()

    def __len__(self) -> int:
        with self._lock:
            return len(self._events)

    def events(self) -> tuple[ActivityEvent, ...]:
        with self._lock:
            return tuple(self._events)

    def record(self, event: ActivityEvent) -> bool:
        """Store an event. Returns False when it is an exact duplicate."""
        for user in (event.actor, event.contact):
            if not self._user_exists(user):
                raise NotFoundError(f"unknown user: {user!r}")
        with self._lock:
            if event.key in self._seen:
                return False
            self._seen.add(event.key)
            self._events.append(event)
            slot = (event.actor, event.contact, event.kind.value)
            self._by_key.setdefault(slot, []).append(event.at)
            return True

    def count(self, actor: str, contact: str, kind: EventKind, as_of: datetime) -> int:
        as_of = normalize_timestamp(as_of)
        with self._lock:
            stamps = self._by_key.get((actor, contact, kind.value), ())
            return sum(1 for at in stamps if in_window(at, as_of))

    def like_ratio(self, actor: str, contact: str, as_of: datetime) -> Fraction | None:
        """Likes over dislikes in the window; None when dislikes are zero."""
        likes = self.count(actor, contact, EventKind.LIKE, as_of)
        dislikes = self.count(actor, contact, EventKind.DISLIKE, as_of)
        if dislikes == 0:
            return None
        return Fraction(likes, dislikes)

    def window_counts(self, actor: str, contact: str, as_of: datetime) -> dict[str, int]:
        """The four interaction counters feeding dynamic trust."""
        return {
            "n_favorites": self.count(actor, contact, EventKind.FAVORITE, as_of),
            "n_retweets": self.count(actor, contact, EventKind.RETWEET, as_of),
            "n_mentions": self.count(actor, contact, EventKind.MENTION, as_of),
            "n_fridayfollows": self.count(actor, contact, EventKind.FRIDAY_FOLLOW, as_of),
        }

    # -- JSON Lines ingest / export -----------------------------------------

    def ingest_lines(self, text: str) -> IngestReport:
        """Ingest JSONL; bad lines are reported by number, ingest continues."""
        report = IngestReport()
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                report.rejected.append((lineno, f"invalid JSON: {exc.msg}"))
                continue
            try:
                event = ActivityEvent.from_json(record)
                stored = self.record(event)
            except (ValidationError, NotFoundError) as exc:
                report.rejected.append((lineno, str(exc)))
                continue
            if stored:
                report.accepted += 1
            else:
                report.duplicates += 1
        return report

    def export_lines(self) -> str:
        """Canonical export: one JSON object per line, sorted by identity."""
        with self._lock:
            ordered = sorted(
                self._events,
                key=lambda e: (e.at, e.actor, e.contact, e.kind.value, e.post_id or ""),
            )
        lines = [
            json.dumps(event.to_json(), sort_keys=True, separators=(",", ":"))
            for event in ordered
        ]
        return "\n".join(lines) + ("\n" if lines else "")


__all__ = [
    "ActivityEvent",
    "ActivityLedger",
    "EventKind",
    "IngestReport",
    "WINDOW",
    "format_timestamp",
    "in_window",
    "normalize_timestamp",
    "parse_timestamp",
]
