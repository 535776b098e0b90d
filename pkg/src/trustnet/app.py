"""Application core: wiring, accounts, sessions, persistence, JSON API.

Both the HTTP service and the CLI's local mode drive this class, so every
method validates its raw inputs and returns a JSON-ready dict; responses
are therefore identical regardless of transport. Persistence is a data
directory of append-only logs (events, posts, admissions) plus snapshot
exports (graph, coefficients, accounts); a clean restart reloads
bit-identical state.
"""

from __future__ import annotations

import hashlib
import json
import secrets
import threading
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from pathlib import Path
from typing import Callable

from .dynamic import CoefficientSet, CoefficientStore
from .errors import (
    AuthenticationError,
    AuthorizationError,
    ConflictError,
    NotFoundError,
    ValidationError,
)
from .fixed import parse_trust
from .graph import SocialGraph, normalize_topic, validate_user_id
from .index import SearchEngine, SearchRequest, TrustMode
from .ledger import ActivityLedger, format_timestamp, parse_timestamp
from .opinion import ForecastBoard, Lexicon, classify
from .quarantine import AdmissionRegistry, identity_fingerprint

ROLE_ADMIN = "admin"
ROLE_NORMAL = "normal"

GRAPH_FILE = "graph.txt"
EVENTS_FILE = "events.jsonl"
POSTS_FILE = "posts.jsonl"
ADMISSION_FILE = "admission.jsonl"
COEFFICIENTS_FILE = "coefficients.cfg"
ACCOUNTS_FILE = "accounts.json"


def canonical_json(payload) -> str:
    """The one JSON serialization used on every output path."""
    return json.dumps(payload, ensure_ascii=False, sort_keys=True, separators=(",", ":"))


def _hash_credential(credential: str) -> str:
    return hashlib.sha256(credential.encode("utf-8")).hexdigest()


@dataclass
class AppConfig:
    data_dir: Path | None = None
    page_size: int = 50
    max_text_len: int = 140
    approval_quorum: int = 3
    flag_quorum: int = 3
    evaporation_rate: float = 0.1
    deposit: float = 1.0
    validation_ttl: timedelta = timedelta(hours=24)
    lexicon_path: Path | None = None
    bootstrap_admin: tuple[str, str] | None = None  # (handle, credential)


@dataclass
class Account:
    handle: str
    credential_hash: str
    role: str = ROLE_NORMAL
    email: str | None = None
    display_name: str | None = None
    active: bool = False

    def to_json(self) -> dict:
        return {
            "credential_hash": self.credential_hash,
            "role": self.role,
            "email": self.email,
            "display_name": self.display_name,
            "active": self.active,
        }

    @classmethod
    def from_json(cls, handle: str, record: dict) -> "Account":
        return cls(handle=handle, **record)


@dataclass
class Session:
    token: str
    user: str
    role: str
    issued_at: datetime


@dataclass
class PendingRegistration:
    user: str
    validation_token: str
    expires_at: datetime


class App:
    """One instance owns all stores and serializes their mutations."""

    def __init__(self, config: AppConfig | None = None, clock: Callable[[], datetime] | None = None):
        self.config = config or AppConfig()
        self.clock = clock or (lambda: datetime.now(timezone.utc))
        self.graph = SocialGraph()
        self.ledger = ActivityLedger(self.graph.has_user)
        self.coefficients = CoefficientStore(is_admin=self.is_admin)
        self.engine = SearchEngine(
            self.graph,
            self.ledger,
            self.coefficients,
            page_size=self.config.page_size,
            max_text_len=self.config.max_text_len,
            on_index=self._post_indexed,
        )
        self.registry = AdmissionRegistry(
            approval_quorum=self.config.approval_quorum,
            flag_quorum=self.config.flag_quorum,
            clock=self.clock,
        )
        self.forecasts = ForecastBoard(
            rho=self.config.evaporation_rate, deposit=self.config.deposit
        )
        self.lexicon = Lexicon.empty()
        if self.config.lexicon_path is not None:
            self.lexicon = Lexicon.from_text(
                Path(self.config.lexicon_path).read_text(encoding="utf-8")
            )
        self.accounts: dict[str, Account] = {}
        self.sessions: dict[str, Session] = {}
        self.pending: dict[str, PendingRegistration] = {}
        self._lock = threading.RLock()
        self._loading = False
        if self.config.data_dir is not None:
            self._load()
        if self.config.bootstrap_admin is not None:
            self._bootstrap_admin(*self.config.bootstrap_admin)

    # -- roles and sessions ------------------------------------------------

    def is_admin(self, user: str) -> bool:
        account = self.accounts.get(user)
        return account is not None and account.active and account.role == ROLE_ADMIN

    def authenticate(self, token: str | None) -> Session:
        if not token:
            raise AuthenticationError("missing session token")
        session = self.sessions.get(token)
        if session is None:
            raise AuthenticationError("invalid session token")
        return session

    def _bootstrap_admin(self, handle: str, credential: str) -> None:
        with self._lock:
            if handle in self.accounts:
                return
            validate_user_id(handle)
            self.accounts[handle] = Account(
                handle=handle,
                credential_hash=_hash_credential(credential),
                role=ROLE_ADMIN,
                active=True,
            )
            self.graph.add_user(handle)
            self._register_member(handle)
            self._persist_accounts()
            self._persist_graph()

    def _register_member(self, user: str) -> None:
        before = self.registry.log_size()
        self.registry.add_member(user, at=self.clock())
        self._append_admission_from(before)

    # -- registration flow ----------------------------------------------------

    def api_register(self, body: dict) -> dict:
        if not isinstance(body, dict):
            raise ValidationError("request body must be a JSON object")
        handle = body.get("handle")
        credential = body.get("credential")
        validate_user_id(handle if isinstance(handle, str) else "")
        if not isinstance(credential, str) or not credential:
            raise ValidationError("credential must be a nonempty string")
        email = body.get("email")
        display_name = body.get("display_name")
        for label, value in (("email", email), ("display_name", display_name)):
            if value is not None and not isinstance(value, str):
                raise ValidationError(f"{label} must be a string")
        with self._lock:
            now = self.clock()
            existing = self.accounts.get(handle)
            if existing is not None and existing.active:
                raise ConflictError(f"handle already registered: {handle!r}")
            if existing is not None and self._has_live_pending(handle, now):
                raise ConflictError(f"registration already pending: {handle!r}")
            token = secrets.token_hex(16)
            expires = now + self.config.validation_ttl
            self.accounts[handle] = Account(
                handle=handle,
                credential_hash=_hash_credential(credential),
                email=email,
                display_name=display_name,
                active=False,
            )
            self.pending = {
                t: p for t, p in self.pending.items() if p.user != handle
            }
            self.pending[token] = PendingRegistration(
                user=handle, validation_token=token, expires_at=expires
            )
            self._persist_accounts()
            return {
                "user": handle,
                "validation_token": token,
                "expires_at": format_timestamp(expires),
            }

    def _has_live_pending(self, handle: str, now: datetime) -> bool:
        return any(
            p.user == handle and p.expires_at > now for p in self.pending.values()
        )

    def api_validate(self, body: dict) -> dict:
        if not isinstance(body, dict):
            raise ValidationError("request body must be a JSON object")
        token = body.get("token")
        with self._lock:
            pending = self.pending.get(token) if isinstance(token, str) else None
            if pending is None:
                raise NotFoundError("unknown validation token")
            if pending.expires_at <= self.clock():
                raise ValidationError("validation token expired")
            del self.pending[token]
            account = self.accounts[pending.user]
            account.active = True
            self.graph.add_user(account.handle)
            self._register_member(account.handle)
            self._persist_accounts()
            self._persist_graph()
            return {"user": account.handle, "active": True}

    def api_login(self, body: dict) -> dict:
        if not isinstance(body, dict):
            raise ValidationError("request body must be a JSON object")
        handle = body.get("handle")
        credential = body.get("credential")
        with self._lock:
            account = self.accounts.get(handle) if isinstance(handle, str) else None
            if (
                account is None
                or not isinstance(credential, str)
                or account.credential_hash != _hash_credential(credential)
            ):
                raise AuthenticationError("unknown handle or wrong credential")
            if not account.active:
                raise AuthorizationError("account is not validated yet")
            token = secrets.token_hex(32)
            self.sessions[token] = Session(
                token=token,
                user=account.handle,
                role=account.role,
                issued_at=self.clock(),
            )
            return {"token": token, "user": account.handle, "role": account.role}

    # -- trust -------------------------------------------------------------------

    def api_set_trust(self, user: str, contact: str, body: dict) -> dict:
        value = self._trust_value_from(body)
        with self._lock:
            if not self.graph.has_user(contact):
                raise NotFoundError(f"unknown user: {contact!r}")
            self.graph.follow(user, contact)
            stored = self.graph.set_static_trust(user, contact, value)
            self._persist_graph()
            return {"contact": contact, "value": str(stored)}

    def api_get_trust(self, user: str, contact: str) -> dict:
        value = self.graph.get_static_trust(user, contact)
        return {"contact": contact, "value": str(value)}

    def api_set_topic_trust(self, user: str, contact: str, topic: str, body: dict) -> dict:
        value = self._trust_value_from(body)
        with self._lock:
            if not self.graph.has_user(contact):
                raise NotFoundError(f"unknown user: {contact!r}")
            self.graph.follow(user, contact)
            stored = self.graph.set_topic_trust(user, contact, topic, value)
            self._persist_graph()
            return {
                "contact": contact,
                "topic": topic.strip().lower(),
                "value": str(stored),
            }

    def api_get_topic_trust(self, user: str, contact: str, topic: str) -> dict:
        value = self.graph.get_topic_trust(user, contact, topic)
        return {"contact": contact, "topic": topic.strip().lower(), "value": str(value)}

    @staticmethod
    def _trust_value_from(body: dict):
        if not isinstance(body, dict) or "value" not in body:
            raise ValidationError('request body must carry a "value" field')
        return body["value"]

    def api_experts(self, user: str, topic: str, threshold) -> dict:
        bar = threshold if threshold is not None else "50.00"
        names = self.graph.experts(user, topic, bar)
        return {
            "topic": normalize_topic(topic),
            "threshold": str(parse_trust(bar)),
            "experts": sorted(names),
        }

    # -- ingest ---------------------------------------------------------------------

    def api_ingest_posts(self, text: str) -> dict:
        with self._lock:
            report = self.engine.ingest_lines(text)
            return {
                "accepted": report.accepted,
                "rejected": [
                    {"line": lineno, "error": message}
                    for lineno, message in report.rejected
                ],
            }

    def api_ingest_events(self, text: str) -> dict:
        with self._lock:
            report = self.ledger.ingest_lines(text)
            self._persist_events()
            return {
                "accepted": report.accepted,
                "duplicates": report.duplicates,
                "rejected": [
                    {"line": lineno, "error": message}
                    for lineno, message in report.rejected
                ],
            }

    def _post_indexed(self, post) -> None:
        """Hook run for every indexed post: forecasts and the posts log."""
        polarity = classify(post.text, self.lexicon)
        for stream in sorted(post.hashtags):
            self.forecasts.observe(stream, polarity)
        if not self._loading:
            self._append_line(
                POSTS_FILE, canonical_json(post.to_json())
            )

    # -- search ----------------------------------------------------------------------

    def api_search(self, user: str, params: dict) -> dict:
        query = params.get("q")
        if not isinstance(query, str) or not query.strip():
            raise ValidationError("query parameter q is required")
        mode = TrustMode.parse(params.get("mode") or "static")
        time_from = parse_timestamp(params["from"]) if params.get("from") else None
        time_to = parse_timestamp(params["to"]) if params.get("to") else None
        friends = None
        if params.get("friends"):
            names = [f for f in str(params["friends"]).split(",") if f]
            friends = frozenset(names)
        raw_page = params.get("page", 1)
        try:
            page = int(raw_page)
        except (TypeError, ValueError):
            raise ValidationError(f"page must be an integer: {raw_page!r}") from None
        request = SearchRequest(
            searcher=user,
            query=query,
            mode=mode,
            time_from=time_from,
            time_to=time_to,
            friends=friends,
            page=page,
        )
        return self.engine.search(request, at=self.clock()).to_json()

    # -- coefficients -----------------------------------------------------------------

    def api_get_coefficients(self, user: str) -> dict:
        if not self.is_admin(user):
            raise AuthorizationError("only an administrator may read coefficients")
        return self.coefficients.get().as_strings()

    def api_set_coefficients(self, user: str, body: dict) -> dict:
        if not self.is_admin(user):
            raise AuthorizationError("only an administrator may set coefficients")
        if not isinstance(body, dict) or not body:
            raise ValidationError("request body must be a nonempty JSON object")
        updated = self.coefficients.get().updated(body)
        with self._lock:
            stored = self.coefficients.set_coefficients(user, updated)
            self._persist_coefficients()
            return stored.as_strings()

    # -- quarantine ---------------------------------------------------------------------

    def api_quarantine_submit(self, body: dict) -> dict:
        if not isinstance(body, dict):
            raise ValidationError("request body must be a JSON object")
        candidate = body.get("candidate")
        validate_user_id(candidate if isinstance(candidate, str) else "")
        fingerprint = identity_fingerprint(
            handle=body.get("handle"),
            email=body.get("email"),
            external_id=body.get("external_id"),
        )
        with self._lock:
            before = self.registry.log_size()
            record = self.registry.submit(candidate, fingerprint, at=self.clock())
            self._append_admission_from(before)
            return self._quarantine_json(record)

    def api_quarantine_approve(self, peer: str, candidate: str) -> dict:
        with self._lock:
            before = self.registry.log_size()
            record = self.registry.approve(peer, candidate, at=self.clock())
            self._append_admission_from(before)
            if record.state.value == "trusted" and not self.graph.has_user(candidate):
                self.graph.add_user(candidate)
                self._persist_graph()
            return self._quarantine_json(record)

    def api_quarantine_flag(self, peer: str, candidate: str) -> dict:
        with self._lock:
            before = self.registry.log_size()
            record = self.registry.flag(peer, candidate, at=self.clock())
            changed = self.registry.log_size() > before
            self._append_admission_from(before)
            payload = self._quarantine_json(record)
            payload["notice"] = None if changed else "candidate already banned"
            if changed and record.state.value == "banned":
                account = self.accounts.get(candidate)
                if account is not None and account.active:
                    account.active = False
                    self._persist_accounts()
            return payload

    def api_quarantine_list(self, user: str) -> dict:
        return {"records": [self._quarantine_json(r) for r in self.registry.records()]}

    @staticmethod
    def _quarantine_json(record) -> dict:
        return record.to_json()

    # -- forecast -----------------------------------------------------------------------

    def api_forecast(self, stream: str) -> dict:
        if not isinstance(stream, str) or not stream.strip():
            raise ValidationError("stream name is required")
        return self.forecasts.report(stream.strip().lower())

    # -- persistence ----------------------------------------------------------------------

    def _path(self, name: str) -> Path:
        return Path(self.config.data_dir) / name

    def _persist_graph(self) -> None:
        if self.config.data_dir is None or self._loading:
            return
        self._path(GRAPH_FILE).write_text(self.graph.export_text(), encoding="utf-8")

    def _persist_coefficients(self) -> None:
        if self.config.data_dir is None or self._loading:
            return
        self._path(COEFFICIENTS_FILE).write_text(
            self.coefficients.get().to_config_text(), encoding="utf-8"
        )

    def _persist_accounts(self) -> None:
        if self.config.data_dir is None or self._loading:
            return
        payload = {
            handle: account.to_json()
            for handle, account in sorted(self.accounts.items())
        }
        self._path(ACCOUNTS_FILE).write_text(
            canonical_json(payload) + "\n", encoding="utf-8"
        )

    def _persist_events(self) -> None:
        if self.config.data_dir is None or self._loading:
            return
        self._path(EVENTS_FILE).write_text(self.ledger.export_lines(), encoding="utf-8")

    def _append_line(self, name: str, line: str) -> None:
        if self.config.data_dir is None or self._loading:
            return
        with self._path(name).open("a", encoding="utf-8") as fh:
            fh.write(line + "\n")

    def _append_admission_from(self, start: int) -> None:
        if self.config.data_dir is None or self._loading:
            return
        text = self.registry.export_lines()
        lines = text.splitlines()
        for line in lines[start:]:
            self._append_line(ADMISSION_FILE, line)

    def save(self) -> None:
        """Rewrite every store canonically (clean-shutdown snapshot)."""
        if self.config.data_dir is None:
            return
        with self._lock:
            directory = Path(self.config.data_dir)
            directory.mkdir(parents=True, exist_ok=True)
            self._path(GRAPH_FILE).write_text(self.graph.export_text(), encoding="utf-8")
            self._path(EVENTS_FILE).write_text(self.ledger.export_lines(), encoding="utf-8")
            self._path(POSTS_FILE).write_text(self.engine.export_lines(), encoding="utf-8")
            self._path(ADMISSION_FILE).write_text(
                self.registry.export_lines(), encoding="utf-8"
            )
            self._path(COEFFICIENTS_FILE).write_text(
                self.coefficients.get().to_config_text(), encoding="utf-8"
            )
            payload = {
                handle: account.to_json()
                for handle, account in sorted(self.accounts.items())
            }
            self._path(ACCOUNTS_FILE).write_text(
                canonical_json(payload) + "\n", encoding="utf-8"
            )

    def _load(self) -> None:
        directory = Path(self.config.data_dir)
        directory.mkdir(parents=True, exist_ok=True)
        self._loading = True
        try:
            graph_path = self._path(GRAPH_FILE)
            if graph_path.exists():
                self.graph.load_text(graph_path.read_text(encoding="utf-8"))
            accounts_path = self._path(ACCOUNTS_FILE)
            if accounts_path.exists():
                records = json.loads(accounts_path.read_text(encoding="utf-8"))
                self.accounts = {
                    handle: Account.from_json(handle, record)
                    for handle, record in records.items()
                }
            coefficients_path = self._path(COEFFICIENTS_FILE)
            if coefficients_path.exists():
                self.coefficients.restore(
                    CoefficientSet.from_config_text(
                        coefficients_path.read_text(encoding="utf-8")
                    )
                )
            events_path = self._path(EVENTS_FILE)
            if events_path.exists():
                report = self.ledger.ingest_lines(events_path.read_text(encoding="utf-8"))
                if report.rejected:
                    lineno, message = report.rejected[0]
                    raise ValidationError(f"events log line {lineno}: {message}")
            posts_path = self._path(POSTS_FILE)
            if posts_path.exists():
                report = self.engine.ingest_lines(posts_path.read_text(encoding="utf-8"))
                if report.rejected:
                    lineno, message = report.rejected[0]
                    raise ValidationError(f"posts log line {lineno}: {message}")
            admission_path = self._path(ADMISSION_FILE)
            if admission_path.exists():
                self.registry.replay_lines(admission_path.read_text(encoding="utf-8"))
        finally:
            self._loading = False


__all__ = [
    "App",
    "AppConfig",
    "Account",
    "PendingRegistration",
    "ROLE_ADMIN",
    "ROLE_NORMAL",
    "Session",
    "canonical_json",
]
