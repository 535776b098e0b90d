"""Trust-ordered keyword search over a stream of short posts.

Matching is case-insensitive whole-token AND over text tokens and hashtag
names. Results are restricted to posts authored by the searcher's
first-level contacts, tagged with the author's static or dynamic trust
(one snapshot per author per search), ordered by (trust desc, created_at
desc, post_id asc), and paginated at a fixed page size.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from decimal import Decimal
from enum import Enum
from typing import Callable

from .dynamic import CoefficientStore, DynamicTrustInput, compute_dynamic_trust
from .errors import ConflictError, NotFoundError, ValidationError
from .graph import SocialGraph
from .ledger import (
    ActivityLedger,
    format_timestamp,
    normalize_timestamp,
    parse_timestamp,
)
from .text import extract_hashtags, extract_mentions, tokenize

PAGE_SIZE = 50
MAX_TEXT_LEN = 140


class TrustMode(str, Enum):
    STATIC = "static"
    DYNAMIC = "dynamic"

    @classmethod
    def parse(cls, name: str) -> "TrustMode":
        for mode in cls:
            if mode.value == name:
                return mode
        raise ValidationError(f"unknown trust mode: {name!r}")


@dataclass(frozen=True)
class Post:
    post_id: str
    author: str
    text: str
    created_at: datetime
    hashtags: frozenset[str]
    mentions: frozenset[str]

    @classmethod
    def build(cls, post_id: str, author: str, text: str, created_at: datetime) -> "Post":
        """Derive hashtags and mentions from the text."""
        if not isinstance(post_id, str) or not post_id:
            raise ValidationError("post_id must be a nonempty string")
        if not isinstance(text, str):
            raise ValidationError("post text must be a string")
        return cls(
            post_id=post_id,
            author=author,
            text=text,
            created_at=normalize_timestamp(created_at),
            hashtags=extract_hashtags(text),
            mentions=extract_mentions(text),
        )

    def to_json(self) -> dict:
        return {
            "post_id": self.post_id,
            "author": self.author,
            "text": self.text,
            "created_at": format_timestamp(self.created_at),
        }


@dataclass(frozen=True)
class SearchRequest:
    searcher: str
    query: str
    mode: TrustMode = TrustMode.STATIC
    time_from: datetime | None = None
    time_to: datetime | None = None
    friends: frozenset[str] | None = None
    page: int = 1


@dataclass(frozen=True)
class RankedResult:
    post: Post
    trust: Decimal
    rank: int

    def to_json(self) -> dict:
        record = self.post.to_json()
        record["trust"] = str(self.trust)
        record["rank"] = self.rank
        return record


@dataclass(frozen=True)
class SearchPage:
    total: int
    page: int
    results: tuple[RankedResult, ...]

    def to_json(self) -> dict:
        return {
            "total": self.total,
            "page": self.page,
            "results": [r.to_json() for r in self.results],
        }


@dataclass
class PostIngestReport:
    accepted: int = 0
    rejected: list[tuple[int, str]] = field(default_factory=list)


class SearchEngine:
    """Inverted index plus trust-ordered ranking over graph and ledger."""

    def __init__(
        self,
        graph: SocialGraph,
        ledger: ActivityLedger,
        coefficients: CoefficientStore,
        page_size: int = PAGE_SIZE,
        max_text_len: int = MAX_TEXT_LEN,
        on_index: Callable[[Post], None] | None = None,
    ):
        self._graph = graph
        self._ledger = ledger
        self._coefficients = coefficients
        self.page_size = page_size
        self.max_text_len = max_text_len
        self._on_index = on_index
        self._posts: dict[str, Post] = {}
        self._by_token: dict[str, set[str]] = {}
        self._lock = threading.RLock()

    def __len__(self) -> int:
        with self._lock:
            return len(self._posts)

    def posts(self) -> tuple[Post, ...]:
        """All posts in ingest order."""
        with self._lock:
            return tuple(self._posts.values())

    def get(self, post_id: str) -> Post:
        with self._lock:
            post = self._posts.get(post_id)
        if post is None:
            raise NotFoundError(f"unknown post: {post_id!r}")
        return post

    def index_post(self, post: Post) -> None:
        if len(post.text) > self.max_text_len:
            raise ValidationError(
                f"post text exceeds {self.max_text_len} characters: {len(post.text)}"
            )
        if not self._graph.has_user(post.author):
            raise NotFoundError(f"unknown author: {post.author!r}")
        with self._lock:
            if post.post_id in self._posts:
                raise ConflictError(f"duplicate post id: {post.post_id!r}")
            self._posts[post.post_id] = post
            for token in set(tokenize(post.text)) | post.hashtags:
                self._by_token.setdefault(token, set()).add(post.post_id)
        if self._on_index is not None:
            self._on_index(post)

    def ingest_lines(self, text: str) -> PostIngestReport:
        """Ingest JSONL posts; bad lines reported by number, ingest continues."""
        report = PostIngestReport()
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
                post = self._parse_post_record(record)
                self.index_post(post)
            except (ValidationError, NotFoundError, ConflictError) as exc:
                report.rejected.append((lineno, str(exc)))
                continue
            report.accepted += 1
        return report

    @staticmethod
    def _parse_post_record(record) -> Post:
        if not isinstance(record, dict):
            raise ValidationError("post must be a JSON object")
        unknown = set(record) - {"post_id", "author", "text", "created_at"}
        if unknown:
            raise ValidationError(f"unknown post fields: {sorted(unknown)}")
        for required in ("post_id", "author", "text", "created_at"):
            if required not in record:
                raise ValidationError(f"post missing field: {required}")
        return Post.build(
            post_id=record["post_id"],
            author=record["author"],
            text=record["text"],
            created_at=parse_timestamp(record["created_at"]),
        )

    def export_lines(self) -> str:
        """JSONL export in ingest order (order drives forecast replay)."""
        lines = [
            json.dumps(post.to_json(), sort_keys=True, separators=(",", ":"))
            for post in self.posts()
        ]
        return "\n".join(lines) + ("\n" if lines else "")

    # -- matching -------------------------------------------------------------

    def _match_ids(self, tokens: list[str]) -> set[str]:
        matched: set[str] | None = None
        for token in tokens:
            ids = self._by_token.get(token, set())
            matched = ids.copy() if matched is None else matched & ids
            if not matched:
                return set()
        return matched or set()

    def results_count(self, searcher: str, contact: str, query: str) -> int:
        """Matching posts authored by the contact, before time/friends filters."""
        tokens = tokenize(query)
        if not tokens:
            raise ValidationError("query must contain at least one token")
        if not self._graph.is_following(searcher, contact):
            raise ValidationError(f"{contact!r} is not a first-level contact of {searcher!r}")
        with self._lock:
            return sum(
                1 for pid in self._match_ids(tokens)
                if self._posts[pid].author == contact
            )

    # -- search ----------------------------------------------------------------

    def search(self, request: SearchRequest, at: datetime | None = None) -> SearchPage:
        tokens = tokenize(request.query)
        if not tokens:
            raise ValidationError("query must contain at least one token")
        if not isinstance(request.page, int) or isinstance(request.page, bool) or request.page < 1:
            raise ValidationError("page must be a positive integer")
        time_from = normalize_timestamp(request.time_from) if request.time_from else None
        time_to = normalize_timestamp(request.time_to) if request.time_to else None
        if time_from is not None and time_to is not None and time_from > time_to:
            raise ValidationError("time range start must not exceed its end")
        contacts = self._graph.following_of(request.searcher)
        allowed = contacts
        if request.friends is not None:
            outsiders = set(request.friends) - contacts
            if outsiders:
                raise ValidationError(
                    f"friends filter is not a subset of contacts: {sorted(outsiders)}"
                )
            allowed = frozenset(request.friends)
        as_of = normalize_timestamp(at) if at else datetime.now(timezone.utc)

        with self._lock:
            candidates = []
            for pid in self._match_ids(tokens):
                post = self._posts[pid]
                if post.author not in allowed:
                    continue
                if time_from is not None and post.created_at < time_from:
                    continue
                if time_to is not None and post.created_at > time_to:
                    continue
                candidates.append(post)
            trust_by_author = {
                author: self._author_trust(request, author, as_of)
                for author in {post.author for post in candidates}
            }

        ordered = sorted(
            candidates,
            key=lambda p: (
                -trust_by_author[p.author],
                -p.created_at.timestamp(),
                p.post_id,
            ),
        )
        start = (request.page - 1) * self.page_size
        page_posts = ordered[start:start + self.page_size]
        results = tuple(
            RankedResult(post=post, trust=trust_by_author[post.author], rank=start + i + 1)
            for i, post in enumerate(page_posts)
        )
        return SearchPage(total=len(ordered), page=request.page, results=results)

    def _author_trust(self, request: SearchRequest, author: str, as_of: datetime) -> Decimal:
        static = self._graph.get_static_trust(request.searcher, author)
        if request.mode is TrustMode.STATIC:
            return static
        counts = self._ledger.window_counts(request.searcher, author, as_of)
        matches = self.results_count(request.searcher, author, request.query)
        return compute_dynamic_trust(
            DynamicTrustInput(
                static_trust=static,
                results_count=matches,
                coefficients=self._coefficients.get(),
                **counts,
            )
        )


__all__ = [
    "MAX_TEXT_LEN",
    "PAGE_SIZE",
    "Post",
    "PostIngestReport",
    "RankedResult",
    "SearchEngine",
    "SearchPage",
    "SearchRequest",
    "TrustMode",
]
