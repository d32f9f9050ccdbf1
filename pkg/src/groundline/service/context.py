"""Citation context windows and lightweight query-language detection."""

from __future__ import annotations

from groundline.corpus.model import Corpus
from groundline.text import sentence_spans

CONTEXT_PAD_BYTES = 300

_LANGUAGE_MARKERS = {
    "fr": {"le", "la", "les", "des", "est", "une", "dans", "pour", "quelle", "quels", "sont"},
    "es": {"el", "los", "las", "es", "una", "como", "donde", "cual", "para", "del"},
}


def detect_language(text: str) -> str:
    """Tiny marker-based detector for log metadata; defaults to English."""
    tokens = set(text.lower().split())
    best, best_hits = "en", 0
    for lang, markers in _LANGUAGE_MARKERS.items():
        hits = len(tokens & markers)
        if hits > best_hits:
            best, best_hits = lang, hits
    return best if best_hits >= 2 else "en"


def context_window(corpus: Corpus, doc_id: str, byte_start: int, byte_end: int,
                   pad: int = CONTEXT_PAD_BYTES) -> tuple[str, tuple[int, int]]:
    """Quote surroundings: +/- ``pad`` bytes snapped to sentence boundaries."""
    canonical = corpus.canonical[doc_id]
    raw = corpus.canonical_bytes(doc_id)
    char_start = len(raw[:byte_start].decode("utf-8"))
    char_end = len(raw[:byte_end].decode("utf-8"))

    left_char = char_start
    width = 0
    while left_char > 0 and width < pad:
        left_char -= 1
        width += len(canonical[left_char].encode("utf-8"))
    right_char = char_end
    width = 0
    while right_char < len(canonical) and width < pad:
        width += len(canonical[right_char].encode("utf-8"))
        right_char += 1

    spans = sentence_spans(canonical)
    ctx_start, ctx_end = left_char, right_char
    for start, end in spans:
        if start <= left_char < end:
            ctx_start = start
        if start <= max(right_char - 1, 0) < end:
            ctx_end = end
    ctx_start = min(ctx_start, char_start)
    ctx_end = max(ctx_end, char_end)

    byte_lo = len(canonical[:ctx_start].encode("utf-8"))
    byte_hi = byte_lo + len(canonical[ctx_start:ctx_end].encode("utf-8"))
    return canonical[ctx_start:ctx_end], (byte_lo, byte_hi)
