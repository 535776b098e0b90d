from __future__ import annotations

from datetime import datetime, timedelta, timezone

import pytest

from trustnet.graph import SocialGraph

UTC = timezone.utc
T0 = datetime(2026, 6, 1, 12, 0, 0, tzinfo=UTC)


class FrozenClock:
    """Deterministic clock for tests; advance explicitly."""

    def __init__(self, start: datetime = T0):
        self.now = start

    def __call__(self) -> datetime:
        return self.now

    def advance(self, **kwargs) -> datetime:
        self.now += timedelta(**kwargs)
        return self.now


@pytest.fixture
def clock() -> FrozenClock:
    return FrozenClock()


@pytest.fixture
def graph() -> SocialGraph:
    g = SocialGraph()
    for user in ("alice", "bob", "carol", "dave"):
        g.add_user(user)
    g.follow("alice", "bob")
    g.follow("alice", "carol")
    g.follow("bob", "carol")
    return g
