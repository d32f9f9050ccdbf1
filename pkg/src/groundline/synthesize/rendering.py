"""Last-mile rendering: localize surface text, never touch the evidence.

Citation markers, numbers, quotes, and the citations list are byte-identical
before and after rendering; only the prose between them is handed to the
localize provider.
"""

from __future__ import annotations

import re

from groundline.envelope import AnswerEnvelope

_PROTECTED_RE = re.compile(r"(\[\d+\]|\d+(?:[.,]\d+)*)")


def _localize_text(text: str, language: str, provider) -> str:
    parts = _PROTECTED_RE.split(text)
    # Odd indices are protected matches; even indices are translatable prose.
    translatable = parts[0::2]
    localized = provider.localize(translatable, language)
    out = []
    for i, part in enumerate(parts):
        out.append(localized[i // 2] if i % 2 == 0 else part)
    return "".join(out)


def render(envelope: AnswerEnvelope, render_language: str | None, provider) -> AnswerEnvelope:
    """Localize envelope surface text in place; falls back on unsupported tags."""
    if render_language is None:
        return envelope
    if not provider.supports(render_language):
        envelope.language_fallback = True
        return envelope
    if envelope.answer is not None:
        envelope.answer.text = _localize_text(envelope.answer.text, render_language, provider)
        envelope.answer.render_language = render_language
    else:
        abst = envelope.abstention
        abst.rationale = _localize_text(abst.rationale, render_language, provider)
        abst.refinements = [
            _localize_text(r, render_language, provider) for r in abst.refinements
        ]
    return envelope
