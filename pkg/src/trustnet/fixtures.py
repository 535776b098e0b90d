"""Reference fixtures for demos and end-to-end checks.

The inversion fixture reproduces the static-versus-dynamic ordering flip:
"ouest-france" holds the highest user-assigned trust (55.00), but the
searcher's recorded interactions with "TechCrunch" push its dynamic trust
to 56.02 for a three-match query, so the two modes rank the same query
differently.
"""

from __future__ import annotations

import json
from datetime import datetime, timedelta
from pathlib import Path

from .app import ROLE_ADMIN, ROLE_NORMAL, Account, App, AppConfig
from .ledger import ActivityEvent, EventKind, format_timestamp

SEARCHER = "searcher"
ADMIN = "admin"
ADMIN_CREDENTIAL = "admin-credential"
SEARCHER_CREDENTIAL = "searcher-credential"
HIGH_TRUST_CONTACT = "ouest-france"
ACTIVE_CONTACT = "TechCrunch"
LOW_TRUST_CONTACT = "dailynews"
OUTSIDER = "stranger"

# Coefficients under which 8 favorites + 3 retweets + 1 mention + 3 query
# matches lift a 50.00 contact to exactly 56.02.
INVERSION_COEFFICIENTS = {
    "c_favorites": "0.5",
    "c_retweets": "0.5",
    "c_mentions": "0.25",
    "c_fridayfollows": "0.25",
    "c_results": "0.09",
}


def _hash(credential: str) -> str:
    import hashlib

    return hashlib.sha256(credential.encode("utf-8")).hexdigest()


def build_inversion_app(
    config: AppConfig | None = None,
    clock=None,
    now: datetime | None = None,
) -> App:
    """Assemble the fixture in a fresh App (optionally persisted)."""
    app = App(config=config, clock=clock)
    now = now or app.clock()

    for handle, credential, role in (
        (ADMIN, ADMIN_CREDENTIAL, ROLE_ADMIN),
        (SEARCHER, SEARCHER_CREDENTIAL, ROLE_NORMAL),
    ):
        app.accounts[handle] = Account(
            handle=handle,
            credential_hash=_hash(credential),
            role=role,
            active=True,
        )
        app.graph.add_user(handle)
        app.registry.add_member(handle, at=now - timedelta(days=30))
    app._persist_accounts()

    for contact in (HIGH_TRUST_CONTACT, ACTIVE_CONTACT, LOW_TRUST_CONTACT, OUTSIDER):
        app.graph.add_user(contact)
    for contact in (HIGH_TRUST_CONTACT, ACTIVE_CONTACT, LOW_TRUST_CONTACT):
        app.graph.follow(SEARCHER, contact)
    app.graph.set_static_trust(SEARCHER, HIGH_TRUST_CONTACT, "55.00")
    app.graph.set_static_trust(SEARCHER, LOW_TRUST_CONTACT, "48.00")
    app._persist_graph()

    app.coefficients.restore(app.coefficients.get().updated(INVERSION_COEFFICIENTS))
    app._persist_coefficients()

    posts = [
        (HIGH_TRUST_CONTACT, "of-1", "Regional farmers expect a record #apple harvest"),
        (HIGH_TRUST_CONTACT, "of-2", "Cider makers bid on the apple surplus this autumn"),
        (ACTIVE_CONTACT, "tc-1", "Apple unveils its next developer toolkit"),
        (ACTIVE_CONTACT, "tc-2", "Startups rush to build on the new #apple platform"),
        (ACTIVE_CONTACT, "tc-3", "Analysts debate the apple earnings call"),
        (LOW_TRUST_CONTACT, "dn-1", "Local bakery wins prize for apple pie"),
        (LOW_TRUST_CONTACT, "dn-2", "City council debates new bus lanes"),
        (OUTSIDER, "st-1", "I also write about apple but nobody follows me"),
    ]
    base = now - timedelta(days=20)
    lines = []
    for offset, (author, post_id, text) in enumerate(posts):
        lines.append(
            json.dumps(
                {
                    "post_id": post_id,
                    "author": author,
                    "text": text,
                    "created_at": format_timestamp(base + timedelta(hours=offset)),
                }
            )
        )
    report = app.api_ingest_posts("\n".join(lines) + "\n")
    assert not report["rejected"], report

    interactions = (
        [EventKind.FAVORITE] * 8 + [EventKind.RETWEET] * 3 + [EventKind.MENTION]
    )
    for offset, kind in enumerate(interactions):
        app.ledger.record(
            ActivityEvent(
                actor=SEARCHER,
                contact=ACTIVE_CONTACT,
                kind=kind,
                at=now - timedelta(days=5, minutes=offset),
                post_id=f"tc-interaction-{offset}",
            )
        )
    app._persist_events()
    return app


def build_inversion_data_dir(data_dir: Path, clock=None) -> App:
    """Build the fixture persisted under `data_dir` and return the live App."""
    config = AppConfig(data_dir=Path(data_dir))
    app = build_inversion_app(config=config, clock=clock)
    app.save()
    return app
