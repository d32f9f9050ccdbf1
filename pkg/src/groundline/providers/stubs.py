"""Deterministic stub providers.

Each stub is a small rule table, documented in ``docs/stub_providers.md`` so
any implementation can reproduce it exactly. With all-stub profiles the
whole query pipeline is a pure function of (corpus, config, query).
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from typing import Any, Sequence

from groundline.providers.base import FieldSpec, ProviderProfile, StructuredSchema
from groundline.text import content_words, jaccard, word_tokens

EMBED_DIM = 256

_QUOTED_RE = re.compile(r'"([^"]+)"')
_YEAR_RE = re.compile(r"\b(19[0-9]{2}|20[0-9]{2})\b")
_CAP_WORD_RE = re.compile(r"[A-Z][a-z]+")

_COMPARATIVE_CUES = ("compare", " versus ", " vs ", " vs. ", "difference between", "relative to")
_ANALYTICAL_CUES = ("why", "how", "impact", "effect", "trend", "analy", "explain", "evolv", "assess")
_UNDERSPECIFIED_CUES = ("recent", "latest", "current")


def _hash64(token: str) -> int:
    digest = hashlib.blake2b(token.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big")


class StubEmbedder:
    """Signed feature hashing of word tokens into a unit-norm vector.

    Rule: for each lowercase alphanumeric token, take the 64-bit blake2b
    digest h; add +1 at position ``h % dim`` when the top bit of h is 0,
    else -1. Normalize to unit L2 norm. Text with no word tokens hashes the
    whole lowercased text as a single token.
    """

    def __init__(self, dim: int = EMBED_DIM):
        self.dim = dim
        self.profile = ProviderProfile(
            role="embed", implementation="stub-feature-hash",
            deterministic=True, config={"dim": dim},
        )

    def embed(self, texts: Sequence[str]) -> list[list[float]]:
        return [self._embed_one(t) for t in texts]

    def _embed_one(self, text: str) -> list[float]:
        tokens = word_tokens(text) or [text.lower()]
        vec = [0.0] * self.dim
        for token in tokens:
            h = _hash64(token)
            sign = 1.0 if (h >> 63) == 0 else -1.0
            vec[h % self.dim] += sign
        norm = sum(x * x for x in vec) ** 0.5
        if norm == 0.0:
            vec[0] = 1.0
            return vec
        return [x / norm for x in vec]


def extract_entities(text: str) -> list[str]:
    """Capitalized words that do not open a sentence, merged when adjacent."""
    sentence_starts = set()
    for m in re.finditer(r"(?:^|[.!?]\s+)([A-Z][a-z]*)", text):
        sentence_starts.add(m.start(1))
    entities: list[str] = []
    last_end = None
    for m in _CAP_WORD_RE.finditer(text):
        if m.start() in sentence_starts:
            continue
        if last_end is not None and text[last_end:m.start()].isspace():
            entities[-1] = entities[-1] + " " + m.group()
        else:
            entities.append(m.group())
        last_end = m.end()
    return entities


def _dedupe(items: list[str]) -> list[str]:
    seen = set()
    out = []
    for item in items:
        if item not in seen:
            seen.add(item)
            out.append(item)
    return out


class StubDecomposer:
    """Rule-table decomposition: cue words pick the intent, coordination
    between entity targets splits comparative queries, and underspecified
    references pull years and entities out of the session context."""

    def __init__(self):
        self.profile = ProviderProfile(
            role="decompose", implementation="stub-rule-table", deterministic=True)

    def decompose(self, query: str, session_context: Sequence[str] = ()) -> list[dict]:
        lowered = query.lower()
        intent = "factual"
        if any(cue in lowered for cue in _COMPARATIVE_CUES):
            intent = "comparative"
        elif any(cue in lowered for cue in _ANALYTICAL_CUES):
            intent = "analytical"

        targets = _dedupe(
            _QUOTED_RE.findall(query)
            + _YEAR_RE.findall(query)
            + extract_entities(query)
        )
        if any(cue in lowered for cue in _UNDERSPECIFIED_CUES):
            for ctx in session_context:
                targets.extend(_YEAR_RE.findall(ctx))
                targets.extend(extract_entities(ctx))
            targets = _dedupe(targets)

        entities = [t for t in targets if not t.isdigit()]
        if intent == "comparative" and len(entities) >= 2:
            pair = self._coordination_span(query, entities)
            if pair is not None:
                span_text, members = pair
                subqueries = []
                shared = [t for t in targets if t not in members]
                for member in members:
                    text = query.replace(span_text, member)
                    for cue in ("Compare ", "compare "):
                        if text.startswith(cue):
                            text = text[len(cue):]
                            break
                    subqueries.append({
                        "text": text,
                        "intent": "factual",
                        "targets": _dedupe([member] + shared),
                    })
                subqueries.append({"text": query, "intent": "comparative", "targets": targets})
                return subqueries
        return [{"text": query, "intent": intent, "targets": targets}]

    @staticmethod
    def _coordination_span(query: str, entities: list[str]) -> tuple[str, list[str]] | None:
        """Find the leftmost ``A and B`` (or comma list) of entity targets."""
        for i, left in enumerate(entities):
            for right in entities[i + 1:]:
                for joiner in (" and ", ", "):
                    span = f"{left}{joiner}{right}"
                    if span in query:
                        return span, [left, right]
        return None


class StubPlanner:
    """Strategy rule table: quoted factual queries go lexical, targeted
    factual queries hybrid, bare factual queries fall back to semantic, and
    analytical/comparative queries go semantic or hybrid."""

    def __init__(self, default_top_k: int = 5):
        self.default_top_k = default_top_k
        self.profile = ProviderProfile(
            role="plan", implementation="stub-rule-table",
            deterministic=True, config={"default_top_k": default_top_k})

    def plan(self, subqueries: Sequence[dict]) -> list[dict]:
        plans = []
        for sq in subqueries:
            text = sq["text"]
            intent = sq["intent"]
            targets = list(sq.get("targets", ()))
            quoted = _QUOTED_RE.findall(text)
            years = [int(y) for y in _YEAR_RE.findall(text)] + [
                int(t) for t in targets if t.isdigit() and _YEAR_RE.fullmatch(t)
            ]
            if intent == "factual":
                if quoted:
                    strategy = "lexical"
                elif targets:
                    strategy = "hybrid"
                else:
                    strategy = "semantic"
            elif intent == "comparative":
                strategy = "hybrid"
            else:
                strategy = "hybrid" if quoted else "semantic"
            year_range = None
            if years:
                low = min(years)
                high = None if re.search(r"\bsince\b", text.lower()) else max(years)
                year_range = (low, high)
            plans.append({
                "strategy": strategy,
                "quoted_phrases": quoted,
                "year_range": year_range,
                "top_k": self.default_top_k,
            })
        return plans


class StubReranker:
    """Cross-scores a span against its sub-query by content-word Jaccard."""

    def __init__(self):
        self.profile = ProviderProfile(
            role="rerank", implementation="stub-jaccard", deterministic=True)

    def rerank(self, query_text: str, span_texts: Sequence[str]) -> list[float]:
        query_words = content_words(query_text)
        return [jaccard(content_words(span), query_words) for span in span_texts]


class StubSupportJudge:
    """Scores claim-vs-span support by content-word Jaccard."""

    def __init__(self):
        self.profile = ProviderProfile(
            role="support", implementation="stub-jaccard", deterministic=True)

    def support(self, claim_text: str, span_texts: Sequence[str]) -> list[float]:
        claim_words = content_words(claim_text)
        return [jaccard(content_words(span), claim_words) for span in span_texts]


class StubDrafter:
    """Extractive composition: one sentence per chosen packet, in order."""

    def __init__(self):
        self.profile = ProviderProfile(
            role="draft", implementation="stub-extractive", deterministic=True)

    def draft(self, items: Sequence[tuple[str, Sequence[tuple[str, str]]]]) -> dict:
        """Compose a draft from ``(subquery_text, [(packet_id, quote)])`` items.

        Returns the draft text plus placements mapping each composed
        sentence's character range back to its source packet.
        """
        parts: list[str] = []
        placements: list[dict] = []
        pos = 0
        for _subquery, packet_quotes in items:
            for packet_id, quote in packet_quotes:
                sentence = quote.strip()
                if not sentence.endswith((".", "!", "?")):
                    sentence += "."
                if parts:
                    parts.append(" ")
                    pos += 1
                placements.append({
                    "start": pos, "end": pos + len(sentence), "packet_id": packet_id,
                })
                parts.append(sentence)
                pos += len(sentence)
        return {"text": "".join(parts), "placements": placements}


class IdentityLocalizer:
    """Renders every supported language as the source text unchanged."""

    def __init__(self):
        self.profile = ProviderProfile(
            role="localize", implementation="stub-identity", deterministic=True)

    def supports(self, language: str) -> bool:
        return True

    def localize(self, segments: Sequence[str], language: str) -> list[str]:
        return list(segments)


JUDGE_DIMENSIONS = (
    "Comprehensiveness",
    "Relevance",
    "Coherence",
    "Appropriateness",
    "Grammatical Correctness",
    "Adherence to Constraints",
    "Causal Reasoning",
    "Safety / Bias",
)

JUDGE_SCHEMA = StructuredSchema(fields=tuple(
    [FieldSpec(name=d, kind="int", minimum=1, maximum=10) for d in JUDGE_DIMENSIONS]
    + [FieldSpec(name="comment", kind="str")]
))


class StubJudge:
    """Constant-score judge; the offline stand-in for rubric scoring."""

    def __init__(self, score: int = 8):
        self.score = score
        self.profile = ProviderProfile(
            role="judge", implementation="stub-constant",
            deterministic=True, config={"score": score})

    def complete(self, prompt: str, schema: StructuredSchema | None = None) -> dict:
        payload = {d: self.score for d in JUDGE_DIMENSIONS}
        payload["comment"] = "Constant stub rubric score."
        if schema is not None:
            return schema.validate(payload)
        return payload


@dataclass
class ProviderSet:
    """The full provider roster recorded with every pipeline run.

    Fields are duck-typed: any object honoring the role's method signature
    (stub or remote adapter) can fill a slot.
    """

    embed: Any
    decompose: Any
    plan: Any
    rerank: Any
    support: Any
    draft: Any
    localize: Any
    judge: Any

    def profiles(self) -> list[ProviderProfile]:
        return [
            self.embed.profile, self.decompose.profile, self.plan.profile,
            self.rerank.profile, self.support.profile, self.draft.profile,
            self.localize.profile, self.judge.profile,
        ]

    def profiles_json(self) -> list[dict]:
        return [p.to_json() for p in self.profiles()]


def stub_providers(embed_dim: int = EMBED_DIM, default_top_k: int = 5) -> ProviderSet:
    return ProviderSet(
        embed=StubEmbedder(dim=embed_dim),
        decompose=StubDecomposer(),
        plan=StubPlanner(default_top_k=default_top_k),
        rerank=StubReranker(),
        support=StubSupportJudge(),
        draft=StubDrafter(),
        localize=IdentityLocalizer(),
        judge=StubJudge(),
    )
