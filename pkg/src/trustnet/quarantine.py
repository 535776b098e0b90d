"""Peer-groomed admission with permanent immunization.

Candidates enter in a quarantined state and are approved or flagged by
trusted members. An approval quorum admits; a flag quorum bans and records
the candidate's identity fingerprint so the same identity can never
re-enter, even under a new handle. All state transitions flow through an
append-only operation log that replays bit-exactly.
"""

from __future__ import annotations

import hashlib
import json
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from typing import Callable

from .errors import (
    AuthorizationError,
    ConflictError,
    ImmunizedError,
    NotFoundError,
    ValidationError,
)
from .graph import validate_user_id
from .ledger import format_timestamp, normalize_timestamp, parse_timestamp

APPROVAL_QUORUM = 3
FLAG_QUORUM = 3


class QuarantineState(str, Enum):
    QUARANTINED = "quarantined"
    TRUSTED = "trusted"
    BANNED = "banned"


class ReentryStatus(str, Enum):
    ADMISSIBLE = "admissible"
    IMMUNIZED = "immunized"


def identity_fingerprint(
    handle: str | None = None,
    email: str | None = None,
    external_id: str | None = None,
) -> str:
    """Deterministic digest of the declared identity attributes.

    Attributes are trimmed and casefolded before hashing, so cosmetic
    changes (case, spacing) map to the same digest. At least one attribute
    must be present.
    """
    parts = []
    for attr in (handle, email, external_id):
        if attr is None:
            parts.append("")
            continue
        if not isinstance(attr, str):
            raise ValidationError("identity attributes must be strings")
        parts.append(attr.strip().casefold())
    if not any(parts):
        raise ValidationError("at least one identity attribute is required")
    return hashlib.sha256("\n".join(parts).encode("utf-8")).hexdigest()


def _validate_fingerprint(fingerprint: str) -> str:
    if (
        not isinstance(fingerprint, str)
        or len(fingerprint) != 64
        or any(ch not in "0123456789abcdef" for ch in fingerprint)
    ):
        raise ValidationError("fingerprint must be 64 lowercase hex characters")
    return fingerprint


@dataclass
class QuarantineRecord:
    candidate: str
    fingerprint: str
    state: QuarantineState
    approvals: set[str] = field(default_factory=set)
    flags: set[str] = field(default_factory=set)
    created_at: datetime | None = None

    def to_json(self) -> dict:
        return {
            "candidate": self.candidate,
            "fingerprint": self.fingerprint,
            "state": self.state.value,
            "approvals": sorted(self.approvals),
            "flags": sorted(self.flags),
            "created_at": format_timestamp(self.created_at),
        }


class AdmissionRegistry:
    """State machine for candidacies, membership, and immunization memory."""

    def __init__(
        self,
        approval_quorum: int = APPROVAL_QUORUM,
        flag_quorum: int = FLAG_QUORUM,
        clock: Callable[[], datetime] | None = None,
    ):
        if approval_quorum < 1 or flag_quorum < 1:
            raise ValidationError("quorums must be at least 1")
        self.approval_quorum = approval_quorum
        self.flag_quorum = flag_quorum
        self._clock = clock or (lambda: datetime.now(timezone.utc))
        self._records: dict[str, QuarantineRecord] = {}
        self._members: set[str] = set()
        self._immunized: dict[str, datetime] = {}
        self._log: list[dict] = []
        self._lock = threading.RLock()

    # -- views ----------------------------------------------------------------

    def members(self) -> frozenset[str]:
        with self._lock:
            return frozenset(self._members)

    def is_member(self, user: str) -> bool:
        with self._lock:
            return user in self._members

    def record_of(self, candidate: str) -> QuarantineRecord:
        with self._lock:
            record = self._records.get(candidate)
            if record is None:
                raise NotFoundError(f"no candidacy for {candidate!r}")
            return record

    def records(self) -> list[QuarantineRecord]:
        with self._lock:
            return sorted(
                self._records.values(),
                key=lambda r: (r.created_at, r.candidate),
            )

    def immunized_fingerprints(self) -> frozenset[str]:
        with self._lock:
            return frozenset(self._immunized)

    def check_reentry(self, fingerprint: str) -> ReentryStatus:
        _validate_fingerprint(fingerprint)
        with self._lock:
            if fingerprint in self._immunized:
                return ReentryStatus.IMMUNIZED
            return ReentryStatus.ADMISSIBLE

    def log_size(self) -> int:
        with self._lock:
            return len(self._log)

    # -- operations -------------------------------------------------------------

    def add_member(self, user: str, at: datetime | None = None) -> bool:
        """Seed a trusted member (validated account). Idempotent; logged."""
        validate_user_id(user)
        with self._lock:
            if user in self._members:
                return False
            stamp = normalize_timestamp(at) if at else normalize_timestamp(self._clock())
            self._members.add(user)
            self._log.append({"op": "member", "user": user, "at": format_timestamp(stamp)})
            return True

    def submit(self, candidate: str, fingerprint: str, at: datetime | None = None) -> QuarantineRecord:
        validate_user_id(candidate)
        _validate_fingerprint(fingerprint)
        with self._lock:
            if fingerprint in self._immunized:
                raise ImmunizedError(
                    "identity fingerprint is permanently banned from re-entry"
                )
            if candidate in self._members:
                raise ConflictError(f"{candidate!r} is already a trusted member")
            if candidate in self._records:
                raise ConflictError(f"{candidate!r} already has a candidacy")
            stamp = normalize_timestamp(at) if at else normalize_timestamp(self._clock())
            record = QuarantineRecord(
                candidate=candidate,
                fingerprint=fingerprint,
                state=QuarantineState.QUARANTINED,
                created_at=stamp,
            )
            self._records[candidate] = record
            self._log.append(
                {
                    "op": "submit",
                    "candidate": candidate,
                    "fingerprint": fingerprint,
                    "at": format_timestamp(stamp),
                }
            )
            return record

    def approve(self, peer: str, candidate: str, at: datetime | None = None) -> QuarantineRecord:
        with self._lock:
            record = self._stance_checks(peer, candidate)
            if record.state is not QuarantineState.QUARANTINED:
                raise ConflictError(f"candidate is not quarantined: {record.state.value}")
            stamp = normalize_timestamp(at) if at else normalize_timestamp(self._clock())
            record.approvals.add(peer)
            if len(record.approvals) >= self.approval_quorum:
                record.state = QuarantineState.TRUSTED
                self._members.add(candidate)
            self._log.append(
                {
                    "op": "approve",
                    "peer": peer,
                    "candidate": candidate,
                    "at": format_timestamp(stamp),
                }
            )
            return record

    def flag(self, peer: str, candidate: str, at: datetime | None = None) -> QuarantineRecord:
        """Record a flag; at quorum the candidate is banned and immunized.

        Flagging an already banned candidate is a no-op (absorbing state).
        """
        with self._lock:
            record = self._stance_checks(peer, candidate, allow_banned=True)
            if record.state is QuarantineState.BANNED:
                return record
            stamp = normalize_timestamp(at) if at else normalize_timestamp(self._clock())
            record.flags.add(peer)
            if len(record.flags) >= self.flag_quorum:
                record.state = QuarantineState.BANNED
                self._members.discard(candidate)
                self._immunized.setdefault(record.fingerprint, stamp)
            self._log.append(
                {
                    "op": "flag",
                    "peer": peer,
                    "candidate": candidate,
                    "at": format_timestamp(stamp),
                }
            )
            return record

    def _stance_checks(
        self, peer: str, candidate: str, allow_banned: bool = False
    ) -> QuarantineRecord:
        if peer not in self._members:
            raise AuthorizationError(f"{peer!r} is not a trusted member")
        record = self._records.get(candidate)
        if record is None:
            raise NotFoundError(f"no candidacy for {candidate!r}")
        if record.state is QuarantineState.BANNED and allow_banned:
            return record
        if peer in record.approvals or peer in record.flags:
            raise ConflictError(f"{peer!r} already holds a stance on {candidate!r}")
        return record

    # -- log export / replay ------------------------------------------------------

    def export_lines(self) -> str:
        with self._lock:
            lines = [
                json.dumps(entry, sort_keys=True, separators=(",", ":"))
                for entry in self._log
            ]
        return "\n".join(lines) + ("\n" if lines else "")

    def replay_lines(self, text: str) -> int:
        """Apply an exported operation log; returns operations applied."""
        applied = 0
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                entry = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValidationError(f"admission log line {lineno}: {exc.msg}") from None
            try:
                self._apply(entry)
            except (ValidationError, NotFoundError, ConflictError, AuthorizationError) as exc:
                raise ValidationError(f"admission log line {lineno}: {exc}") from None
            applied += 1
        return applied

    def _apply(self, entry: dict) -> None:
        op = entry.get("op")
        at = parse_timestamp(entry["at"])
        if op == "member":
            self.add_member(entry["user"], at=at)
        elif op == "submit":
            self.submit(entry["candidate"], entry["fingerprint"], at=at)
        elif op == "approve":
            self.approve(entry["peer"], entry["candidate"], at=at)
        elif op == "flag":
            self.flag(entry["peer"], entry["candidate"], at=at)
        else:
            raise ValidationError(f"unknown admission operation: {op!r}")


__all__ = [
    "APPROVAL_QUORUM",
    "FLAG_QUORUM",
    "AdmissionRegistry",
    "QuarantineRecord",
    "QuarantineState",
    "ReentryStatus",
    "identity_fingerprint",
]
