"""Follow graph with per-edge trust.

Holds users, directed follow edges, per-edge static trust, per-topic trust,
hop-count distance, distance-decayed inferred trust, and the topic-experts
projection. Mutations are serialized behind one lock; reads take the same
lock so they always observe a consistent state.
"""

from __future__ import annotations

import threading
from collections import deque
from decimal import Decimal
from enum import Enum

from .errors import NotFoundError, ValidationError
from .fixed import DEFAULT_TRUST, parse_trust, round_trust, trust_fraction


class DecayMode(Enum):
    """How inferred trust falls off with hop distance beyond the first."""

    LINEAR = "linear"
    INVERSE_SQUARE = "inverse_square"

    @classmethod
    def parse(cls, name: str) -> "DecayMode":
        for mode in cls:
            if mode.value == name:
                return mode
        raise ValidationError(f"unknown decay mode: {name!r}")


def validate_user_id(user_id: str) -> str:
    """User ids are nonempty, whitespace-free strings (case-sensitive).

    Whitespace is rejected because the line-oriented graph export uses
    single spaces as field separators.
    """
    if not isinstance(user_id, str) or not user_id:
        raise ValidationError("user id must be a nonempty string")
    if any(ch.isspace() for ch in user_id):
        raise ValidationError(f"user id must not contain whitespace: {user_id!r}")
    return user_id


def normalize_topic(name: str) -> str:
    """Topics are nonempty lowercase tokens; normalization is idempotent."""
    if not isinstance(name, str):
        raise ValidationError("topic must be a string")
    normalized = name.strip().lower()
    if not normalized:
        raise ValidationError("topic must be nonempty")
    if any(ch.isspace() for ch in normalized):
        raise ValidationError(f"topic must be a single token: {name!r}")
    return normalized


def decayed_trust(first_hop_trust: Decimal, hops: int, mode: DecayMode) -> Decimal:
    """Decay a first-hop trust value over `hops` levels of separation.

    Distance 1 returns the value unchanged; beyond that the value divides
    by the distance (linear) or its square (inverse-square), half-up at
    two decimals.
    """
    if hops < 1:
        raise ValidationError("hop count must be at least 1")
    if hops == 1:
        return parse_trust(first_hop_trust)
    divisor = hops if mode is DecayMode.LINEAR else hops * hops
    return round_trust(trust_fraction(parse_trust(first_hop_trust)) / divisor)


class SocialGraph:
    """Users, directed follow edges, and the trust stored on them."""

    def __init__(self):
        self._following: dict[str, set[str]] = {}
        self._static: dict[tuple[str, str], Decimal] = {}
        self._topic: dict[tuple[str, str, str], Decimal] = {}
        self._lock = threading.RLock()

    # -- users and edges -------------------------------------------------

    def add_user(self, user_id: str) -> None:
        validate_user_id(user_id)
        with self._lock:
            self._following.setdefault(user_id, set())

    def has_user(self, user_id: str) -> bool:
        with self._lock:
            return user_id in self._following

    def users(self) -> frozenset[str]:
        with self._lock:
            return frozenset(self._following)

    def _require_user(self, user_id: str) -> None:
        if user_id not in self._following:
            raise NotFoundError(f"unknown user: {user_id!r}")

    def follow(self, follower: str, followee: str) -> None:
        """Create the directed edge follower -> followee (idempotent)."""
        with self._lock:
            self._require_user(follower)
            self._require_user(followee)
            if follower == followee:
                raise ValidationError("a user cannot follow themselves")
            self._following[follower].add(followee)

    def is_following(self, follower: str, followee: str) -> bool:
        with self._lock:
            return followee in self._following.get(follower, ())

    def following_of(self, user_id: str) -> frozenset[str]:
        with self._lock:
            self._require_user(user_id)
            return frozenset(self._following[user_id])

    def _require_edge(self, follower: str, followee: str) -> None:
        self._require_user(follower)
        self._require_user(followee)
        if followee not in self._following[follower]:
            raise NotFoundError(f"no follow edge {follower!r} -> {followee!r}")

    # -- trust cells ------------------------------------------------------

    def set_static_trust(self, follower: str, followee: str, value) -> Decimal:
        trust = parse_trust(value)
        with self._lock:
            self._require_edge(follower, followee)
            self._static[(follower, followee)] = trust
        return trust

    def get_static_trust(self, follower: str, followee: str) -> Decimal:
        with self._lock:
            self._require_edge(follower, followee)
            return self._static.get((follower, followee), DEFAULT_TRUST)

    def set_topic_trust(self, follower: str, followee: str, topic: str, value) -> Decimal:
        trust = parse_trust(value)
        name = normalize_topic(topic)
        with self._lock:
            self._require_edge(follower, followee)
            self._topic[(follower, followee, name)] = trust
        return trust

    def get_topic_trust(self, follower: str, followee: str, topic: str) -> Decimal:
        """Topic trust for the edge; falls back to static trust when unset."""
        name = normalize_topic(topic)
        with self._lock:
            self._require_edge(follower, followee)
            stored = self._topic.get((follower, followee, name))
            if stored is not None:
                return stored
            return self._static.get((follower, followee), DEFAULT_TRUST)

    # -- distance and inferred trust ---------------------------------------

    def distance(self, origin: str, target: str) -> int | None:
        """Shortest directed hop count, 0 for self, None when unreachable."""
        with self._lock:
            self._require_user(origin)
            self._require_user(target)
            if origin == target:
                return 0
            seen = {origin: 0}
            queue = deque([origin])
            while queue:
                node = queue.popleft()
                hops = seen[node] + 1
                for nxt in self._following[node]:
                    if nxt == target:
                        return hops
                    if nxt not in seen:
                        seen[nxt] = hops
                        queue.append(nxt)
            return None

    def inferred_trust(self, origin: str, target: str, mode: DecayMode) -> Decimal | None:
        """Distance-decayed trust toward an indirect contact.

        The base value is the highest static trust among the first hops of
        shortest paths; it decays per `mode`. None when target is
        unreachable.
        """
        with self._lock:
            self._require_user(origin)
            self._require_user(target)
            if origin == target:
                raise ValidationError("inferred trust requires two distinct users")
            hops_to_target = self._distances_to(target)
            hops = hops_to_target.get(origin)
            if hops is None:
                return None
            first_hops = [
                contact
                for contact in self._following[origin]
                if hops_to_target.get(contact) == hops - 1
            ]
            base = max(
                self._static.get((origin, contact), DEFAULT_TRUST)
                for contact in first_hops
            )
            return decayed_trust(base, hops, mode)

    def _distances_to(self, target: str) -> dict[str, int]:
        """Hop counts from every node to `target` (reverse BFS)."""
        reverse: dict[str, list[str]] = {user: [] for user in self._following}
        for follower, followees in self._following.items():
            for followee in followees:
                reverse[followee].append(follower)
        dist = {target: 0}
        queue = deque([target])
        while queue:
            node = queue.popleft()
            for prev in reverse[node]:
                if prev not in dist:
                    dist[prev] = dist[node] + 1
                    queue.append(prev)
        return dist

    # -- experts projection -------------------------------------------------

    def experts(self, user_id: str, topic: str, threshold) -> frozenset[str]:
        """First-level contacts whose effective topic trust clears threshold."""
        name = normalize_topic(topic)
        bar = parse_trust(threshold)
        with self._lock:
            self._require_user(user_id)
            result = set()
            for contact in self._following[user_id]:
                effective = self._topic.get(
                    (user_id, contact, name),
                    self._static.get((user_id, contact), DEFAULT_TRUST),
                )
                if effective >= bar:
                    result.add(contact)
            return frozenset(result)

    # -- line-oriented export / import --------------------------------------

    def export_text(self) -> str:
        """Serialize as `user`, `follow`, `topic_trust` records, sorted."""
        with self._lock:
            lines = [f"user {user}" for user in sorted(self._following)]
            for follower in sorted(self._following):
                for followee in sorted(self._following[follower]):
                    trust = self._static.get((follower, followee), DEFAULT_TRUST)
                    lines.append(f"follow {follower} {followee} {trust}")
            for (follower, followee, topic) in sorted(self._topic):
                lines.append(
                    f"topic_trust {follower} {followee} {topic} "
                    f"{self._topic[(follower, followee, topic)]}"
                )
            return "\n".join(lines) + ("\n" if lines else "")

    @classmethod
    def from_text(cls, text: str) -> "SocialGraph":
        """Parse an export. Record order is free; topic trust needs its edge."""
        graph = cls()
        deferred: list[tuple[int, list[str]]] = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line:
                continue
            fields = line.split(" ")
            try:
                if fields[0] == "user" and len(fields) == 2:
                    graph.add_user(fields[1])
                elif fields[0] == "follow" and len(fields) == 4:
                    graph.add_user(fields[1])
                    graph.add_user(fields[2])
                    graph.follow(fields[1], fields[2])
                    graph.set_static_trust(fields[1], fields[2], fields[3])
                elif fields[0] == "topic_trust" and len(fields) == 5:
                    deferred.append((lineno, fields))
                else:
                    raise ValidationError(f"unrecognized record: {line!r}")
            except (ValidationError, NotFoundError) as exc:
                raise ValidationError(f"graph line {lineno}: {exc}") from None
        for lineno, fields in deferred:
            try:
                graph.set_topic_trust(fields[1], fields[2], fields[3], fields[4])
            except (ValidationError, NotFoundError) as exc:
                raise ValidationError(f"graph line {lineno}: {exc}") from None
        return graph

    def load_text(self, text: str) -> None:
        """Replace this graph's contents from an export, in place."""
        loaded = SocialGraph.from_text(text)
        with self._lock:
            self._following = loaded._following
            self._static = loaded._static
            self._topic = loaded._topic


__all__ = [
    "DecayMode",
    "SocialGraph",
    "decayed_trust",
    "normalize_topic",
    "validate_user_id",
]
