"""Shared text primitives: token counting, sentence spans, content words.

Every stage that measures or slices text goes through this module so the
whole pipeline agrees on what a token and a sentence are.
"""

from __future__ import annotations

import re

# A token is a maximal run of non-whitespace characters.
_TOKEN_RE = re.compile(r"\S+")

# A word (for scoring, indexing, and hashing) is a lowercase alphanumeric run.
_WORD_RE = re.compile(r"[a-z0-9]+")

# Sentence boundary: terminator, whitespace, then an uppercase letter or
# digit. No abbreviation handling; the rule is deterministic by design.
_SENTENCE_BREAK_RE = re.compile(r"[.!?]\s+(?=[A-Z0-9])")

# Default English stopword list used for content-word extraction. Shipped as
# a documented default; the underlying systems never published theirs.
STOPWORDS = frozenset(
    """
    a about above after again all am an and any are as at be because been
    before being below between both but by can did do does doing down during
    each few for from further had has have having he her here hers him his
    how i if in into is it its just me more most my no nor not of off on
    once only or other our ours out over own same she should so some such
    than that the their theirs them then there these they this those through
    to too under until up very was we were what when where which while who
    whom why will with you your yours
    """.split()
)


def count_tokens(text: str) -> int:
    """Number of maximal non-whitespace runs in ``text``."""
    return len(_TOKEN_RE.findall(text))


def token_spans(text: str) -> list[tuple[int, int]]:
    """Character spans of each whitespace-delimited token."""
    return [m.span() for m in _TOKEN_RE.finditer(text)]


def word_tokens(text: str) -> list[str]:
    """Lowercase alphanumeric word tokens, in order, duplicates kept."""
    return _WORD_RE.findall(text.lower())


def content_words(text: str) -> set[str]:
    """Set of word tokens with stopwords removed."""
    return {w for w in word_tokens(text) if w not in STOPWORDS}


def jaccard(a: set[str], b: set[str]) -> float:
    """Set Jaccard similarity; empty-union pairs score 0.0."""
    if not a and not b:
        return 0.0
    union = a | b
    if not union:
        return 0.0
    return len(a & b) / len(union)


def sentence_spans(text: str) -> list[tuple[int, int]]:
    """Split ``text`` into sentence spans that tile it exactly.

    Boundaries fall after a terminator plus the following whitespace, so a
    sentence keeps its trailing whitespace and the concatenation of all
    slices reproduces the input byte-for-byte. Text without a boundary is a
    single span.
    """
    if not text:
        return []
    starts = [0]
    for m in _SENTENCE_BREAK_RE.finditer(text):
        starts.append(m.end())
    spans = []
    for i, start in enumerate(starts):
        end = starts[i + 1] if i + 1 < len(starts) else len(text)
        spans.append((start, end))
    return spans


def sentences(text: str) -> list[str]:
    """Sentence slices of ``text`` (trailing whitespace kept)."""
    return [text[s:e] for s, e in sentence_spans(text)]


def normalize_space(text: str) -> str:
    """Collapse whitespace runs to single spaces and strip the ends."""
    return " ".join(text.split())


def utf8_len(text: str) -> int:
    """Byte length of ``text`` encoded as UTF-8."""
    return len(text.encode("utf-8"))
