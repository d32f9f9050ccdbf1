"""Answer envelope: a grounded answer or a reasoned abstention, never both."""

from __future__ import annotations

from dataclasses import dataclass, field

from groundline.verify import VerificationReport


@dataclass(frozen=True)
class CitationAnchor:
    """Byte-exact reference binding a claim to its source span.

    ``byte_range`` indexes the UTF-8 canonical text of ``doc_id``; slicing
    it reproduces ``quote`` exactly. Quotes stay in the source language no
    matter how the surrounding answer is rendered.
    """

    anchor_id: str
    node_id: str
    doc_id: str
    page: int
    byte_range: tuple[int, int]
    quote: str

    def to_json(self) -> dict:
        return {
            "anchor_id": self.anchor_id,
            "node_id": self.node_id,
            "doc_id": self.doc_id,
            "page": self.page,
            "byte_range": list(self.byte_range),
            "quote": self.quote,
        }


@dataclass
class GroundedAnswer:
    text: str
    citations: list[CitationAnchor]
    render_language: str
    verification: VerificationReport


@dataclass
class Abstention:
    rationale: str
    refinements: list[str]
    related_topics: list[tuple[str, str]]  # (doc title, doc_id)
    verification: VerificationReport


@dataclass
class AnswerEnvelope:
    kind: str  # "grounded" | "abstained"
    query: str
    corpus_version: str
    trace_id: str
    answer: GroundedAnswer | None = None
    abstention: Abstention | None = None
    timings: dict[str, int] = field(default_factory=dict)
    language_fallback: bool = False

    def __post_init__(self) -> None:
        if (self.answer is None) == (self.abstention is None):
            raise ValueError("envelope must hold exactly one of answer or abstention")
        expected = "grounded" if self.answer is not None else "abstained"
        if self.kind != expected:
            raise ValueError(f"kind {self.kind!r} does not match payload")

    @property
    def verification(self) -> VerificationReport:
        payload = self.answer if self.answer is not None else self.abstention
        return payload.verification

    def citation_count(self) -> int:
        return len(self.answer.citations) if self.answer else 0

    def to_json(self) -> dict:
        payload = {
            "kind": self.kind,
            "query": self.query,
            "corpus_version": self.corpus_version,
            "trace_id": self.trace_id,
            "timings": dict(self.timings),
            "language_fallback": self.language_fallback,
            "verification": self.verification.to_json(),
        }
        if self.answer is not None:
            payload.update({
                "text": self.answer.text,
                "citations": [c.to_json() for c in self.answer.citations],
                "render_language": self.answer.render_language,
            })
        else:
            payload.update({
                "rationale": self.abstention.rationale,
                "refinements": list(self.abstention.refinements),
                "related_topics": [
                    {"title": title, "doc_id": doc_id}
                    for title, doc_id in self.abstention.related_topics
                ],
            })
        return payload
