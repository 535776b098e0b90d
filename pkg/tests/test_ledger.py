import json
from datetime import datetime, timedelta, timezone
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trustnet.errors import NotFoundError, ValidationError
from trustnet.ledger import (
    WINDOW,
    ActivityEvent,
    ActivityLedger,
    EventKind,
    format_timestamp,
    parse_timestamp,
)

UTC = timezone.utc
NOW = datetime(2026, 6, 1, 12, 0, 0, tzinfo=UTC)


def make_ledger(users=("alice", "bob", "carol")):
    members = set(users)
    return ActivityLedger(user_exists=members.__contains__)


def ev(kind=EventKind.FAVORITE, at=NOW, actor="alice", contact="bob", post_id=None):
    return ActivityEvent(actor=actor, contact=contact, kind=kind, at=at, post_id=post_id)


def test_record_and_count():
    ledger = make_ledger()
    assert ledger.count("alice", "bob", EventKind.FAVORITE, NOW) == 0
    assert ledger.record(ev(at=NOW - timedelta(days=1)))
    assert ledger.count("alice", "bob", EventKind.FAVORITE, NOW) == 1
    assert ledger.count("alice", "bob", EventKind.RETWEET, NOW) == 0
    assert ledger.count("bob", "alice", EventKind.FAVORITE, NOW) == 0


def test_self_event_rejected():
    with pytest.raises(ValidationError):
        ev(actor="alice", contact="alice")


def test_unknown_user_rejected():
    ledger = make_ledger(users=("alice",))
    with pytest.raises(NotFoundError):
        ledger.record(ev(contact="ghost"))


def test_future_events_stored_but_not_counted_early():
    ledger = make_ledger()
    future = NOW + timedelta(days=3)
    assert ledger.record(ev(at=future))
    assert ledger.count("alice", "bob", EventKind.FAVORITE, NOW) == 0
    assert ledger.count("alice", "bob", EventKind.FAVORITE, future) == 1


def test_window_boundaries():
    ledger = make_ledger()
    ledger.record(ev(at=NOW - timedelta(days=366), post_id="old"))
    ledger.record(ev(at=NOW - WINDOW, post_id="edge"))  # exactly 365d old: out
    ledger.record(ev(at=NOW - WINDOW + timedelta(seconds=1), post_id="in"))
    ledger.record(ev(at=NOW, post_id="now"))
    assert ledger.count("alice", "bob", EventKind.FAVORITE, NOW) == 2


def test_duplicates_collapse():
    ledger = make_ledger()
    event = ev(post_id="p1")
    assert ledger.record(event) is True
    assert ledger.record(ev(post_id="p1")) is False
    assert len(ledger) == 1
    # same identity except post_id is a distinct event
    assert ledger.record(ev(post_id="p2")) is True


def test_like_ratio():
    ledger = make_ledger()
    for i in range(6):
        ledger.record(ev(kind=EventKind.LIKE, post_id=f"l{i}"))
    assert ledger.like_ratio("alice", "bob", NOW) is None  # no dislikes yet
    for i in range(3):
        ledger.record(ev(kind=EventKind.DISLIKE, post_id=f"d{i}"))
    assert ledger.like_ratio("alice", "bob", NOW) == Fraction(2)
    assert ledger.like_ratio("bob", "carol", NOW) is None


def test_like_ratio_zero_likes():
    ledger = make_ledger()
    ledger.record(ev(kind=EventKind.DISLIKE, post_id="d0"))
    ledger.record(ev(kind=EventKind.DISLIKE, post_id="d1"))
    assert ledger.like_ratio("alice", "bob", NOW) == Fraction(0)


def test_timestamp_parsing_and_formatting():
    parsed = parse_timestamp("2012-05-01T12:00:00Z")
    assert parsed == datetime(2012, 5, 1, 12, 0, 0, tzinfo=UTC)
    assert format_timestamp(parsed) == "2012-05-01T12:00:00Z"
    assert parse_timestamp("2012-05-01T14:00:00+02:00") == parsed
    with pytest.raises(ValidationError):
        parse_timestamp("yesterday")


def test_ingest_lines_reports_bad_lines_and_continues():
    ledger = make_ledger()
    lines = "\n".join(
        [
            json.dumps({"actor": "alice", "contact": "bob", "kind": "favorite",
                        "at": "2026-05-30T10:00:00Z"}),
            "not json",
            json.dumps({"actor": "alice", "contact": "alice", "kind": "favorite",
                        "at": "2026-05-30T10:00:00Z"}),
            json.dumps({"actor": "alice", "contact": "bob", "kind": "sneeze",
                        "at": "2026-05-30T10:00:00Z"}),
            json.dumps({"actor": "alice", "contact": "bob", "kind": "favorite",
                        "at": "2026-05-30T10:00:00Z"}),
        ]
    )
    report = ledger.ingest_lines(lines)
    assert report.accepted == 1
    assert report.duplicates == 1
    assert [lineno for lineno, _ in report.rejected] == [2, 3, 4]
    assert ledger.count("alice", "bob", EventKind.FAVORITE, NOW) == 1


def test_export_is_canonical_and_replayable():
    ledger = make_ledger()
    ledger.record(ev(at=NOW - timedelta(days=2), post_id="b"))
    ledger.record(ev(at=NOW - timedelta(days=5), post_id="a"))
    text = ledger.export_lines()
    replayed = make_ledger()
    report = replayed.ingest_lines(text)
    assert report.accepted == 2 and not report.rejected
    assert replayed.export_lines() == text


# -- window property against a brute-force oracle ------------------------------

timestamps = st.integers(
    min_value=int(datetime(2024, 1, 1, tzinfo=UTC).timestamp()),
    max_value=int(datetime(2027, 12, 31, tzinfo=UTC).timestamp()),
).map(lambda s: datetime.fromtimestamp(s, tz=UTC))


@settings(max_examples=60, deadline=None)
@given(
    stamps=st.lists(timestamps, min_size=0, max_size=40),
    as_of=timestamps,
)
def test_window_count_matches_brute_force(stamps, as_of):
    ledger = make_ledger()
    for i, at in enumerate(stamps):
        ledger.record(ev(at=at, post_id=f"p{i}"))
    expected = sum(1 for at in stamps if as_of - WINDOW < at <= as_of)
    assert ledger.count("alice", "bob", EventKind.FAVORITE, as_of) == expected


@settings(max_examples=30, deadline=None)
@given(stamps=st.lists(timestamps, min_size=1, max_size=25), data=st.data())
def test_replay_order_independent(stamps, data):
    events = [ev(at=at, post_id=f"p{i}") for i, at in enumerate(stamps)]
    shuffled = data.draw(st.permutations(events))
    forward, reordered = make_ledger(), make_ledger()
    for event in events:
        forward.record(event)
    for event in shuffled:
        reordered.record(event)
    assert forward.export_lines() == reordered.export_lines()
    probe = data.draw(st.sampled_from(stamps))
    assert forward.count("alice", "bob", EventKind.FAVORITE, probe) == reordered.count(
        "alice", "bob", EventKind.FAVORITE, probe
    )
