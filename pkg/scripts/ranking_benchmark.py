#!/usr/bin/env python3
"""Measure trust-ordered search latency over growing random corpora.

    python3 scripts/ranking_benchmark.py [--sizes 1000,5000,20000] [--queries 50]

Reports per-query latency for static and dynamic mode at each corpus size.
"""

import argparse
import random
import time
from datetime import datetime, timedelta, timezone

from trustnet.dynamic import CoefficientSet, CoefficientStore
from trustnet.graph import SocialGraph
from trustnet.index import Post, SearchEngine, SearchRequest, TrustMode
from trustnet.ledger import ActivityEvent, ActivityLedger, EventKind

NOW = datetime(2026, 6, 1, 12, 0, 0, tzinfo=timezone.utc)
VOCAB = [
    "apple", "pear", "news", "match", "game", "vote", "city", "rain", "film",
    "code", "market", "coffee", "train", "music", "book", "pie", "storm",
    "press", "trade", "goal", "river", "stage", "paint", "cloud", "field",
]


def build(size, rng):
    graph = SocialGraph()
    graph.add_user("searcher")
    contacts = [f"c{i:03d}" for i in range(50)]
    for contact in contacts:
        graph.add_user(contact)
        graph.follow("searcher", contact)
        graph.set_static_trust("searcher", contact, rng.randint(0, 100))
    ledger = ActivityLedger(graph.has_user)
    for i in range(size // 2):
        ledger.record(ActivityEvent(
            "searcher", rng.choice(contacts),
            rng.choice([EventKind.FAVORITE, EventKind.RETWEET, EventKind.MENTION]),
            NOW - timedelta(hours=rng.randint(0, 24 * 400)), f"e{i}",
        ))
    engine = SearchEngine(graph, ledger, CoefficientStore(initial=CoefficientSet()))
    for i in range(size):
        engine.index_post(Post.build(
            f"p{i:06d}", rng.choice(contacts),
            " ".join(rng.choices(VOCAB, k=rng.randint(2, 8))),
            NOW - timedelta(minutes=rng.randint(0, 1_000_000)),
        ))
    return engine


def bench(engine, mode, queries, rng):
    started = time.perf_counter()
    hits = 0
    for _ in range(queries):
        query = " ".join(rng.sample(VOCAB, k=rng.randint(1, 2)))
        page = engine.search(
            SearchRequest(searcher="searcher", query=query, mode=mode), at=NOW
        )
        hits += page.total
    elapsed = time.perf_counter() - started
    return elapsed / queries, hits / queries


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="1000,5000,20000")
    parser.add_argument("--queries", type=int, default=50)
    parser.add_argument("--seed", type=int, default=1)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    print(f"{'posts':>8}  {'mode':<8}{'ms/query':>10}{'avg matches':>13}")
    for size in (int(s) for s in args.sizes.split(",")):
        engine = build(size, rng)
        for mode in (TrustMode.STATIC, TrustMode.DYNAMIC):
            per_query, avg_hits = bench(engine, mode, args.queries, rng)
            print(f"{size:>8}  {mode.value:<8}{per_query * 1000:>10.2f}{avg_hits:>13.1f}")


if __name__ == "__main__":
    main()
