"""Tokenization shared by the search index and the polarity classifier.

Tokens are maximal runs of Unicode alphanumerics, lowercased. Hashtag and
mention markers are separators, so `#apple` yields the token `apple`.
"""

from __future__ import annotations

import re

_HASHTAG_RE = re.compile(r"#([^\W_]+)", re.UNICODE)
_MENTION_RE = re.compile(r"@([^\W_]+)", re.UNICODE)


def tokenize(text: str) -> list[str]:
    cleaned = "".join(ch if ch.isalnum() else " " for ch in text.lower())
    return cleaned.split()


def extract_hashtags(text: str) -> frozenset[str]:
    return frozenset(m.group(1).lower() for m in _HASHTAG_RE.finditer(text))


def extract_mentions(text: str) -> frozenset[str]:
    return frozenset(m.group(1).lower() for m in _MENTION_RE.finditer(text))
