"""Query normalization for log analysis.

Pipeline: optional translation to English (provider-backed; the stub is
identity), lowercasing, punctuation and digit stripping, and suffix-strip
lemmatization. Keyword matching runs on the lemmatized stream with
function words retained, because the curated taxonomies themselves contain
phrases like "how to" and "impact of"; stopword removal and short-token
filtering apply afterwards, for the TF-IDF representative-terms step.
"""

from __future__ import annotations

import re

from groundline.text import STOPWORDS

_PUNCT_DIGIT_RE = re.compile(r"[^a-z\s]+")
_VOWELS = set("aeiou")


def lemmatize(word: str) -> str:
    """Documented suffix-strip table: ing / ed / ies / es / s with guards."""
    if len(word) > 5 and word.endswith("ing") and _VOWELS & set(word[:-3]):
        return word[:-3]
    if len(word) > 4 and word.endswith("ed") and _VOWELS & set(word[:-2]):
        return word[:-2]
    if len(word) > 3 and word.endswith("ies"):
        return word[:-3] + "y"
    if len(word) > 3 and word.endswith(("sses", "xes", "zes", "ches", "shes")):
        return word[:-2]
    if len(word) > 3 and word.endswith("s") and not word.endswith(("ss", "us", "is")):
        return word[:-1]
    return word


def match_tokens(text: str, localizer=None) -> list[str]:
    """Lemmatized lowercase tokens with function words retained."""
    if localizer is not None:
        text = localizer.localize([text], "en")[0]
    lowered = text.lower()
    cleaned = _PUNCT_DIGIT_RE.sub(" ", lowered)
    return [lemmatize(tok) for tok in cleaned.split()]


def content_tokens(tokens: list[str]) -> list[str]:
    """Stopword-free tokens of length >= 3 for representative-term mining."""
    return [t for t in tokens if t not in STOPWORDS and len(t) >= 3]
