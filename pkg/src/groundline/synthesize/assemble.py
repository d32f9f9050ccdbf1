"""Gate-and-assemble: verify the draft, redraft once, emit answer or abstention."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

from groundline.agents.types import EvidencePacket
from groundline.config import PipelineConfig
from groundline.corpus.model import Corpus
from groundline.envelope import Abstention, CitationAnchor, GroundedAnswer
from groundline.synthesize.anchors import build_anchor
from groundline.synthesize.drafting import Placement, redraft
from groundline.verify import VerificationReport, verify_draft

_TRAILING_TERMINATOR_RE = re.compile(r"[.!?]\s*$")


@dataclass
class AssemblyResult:
    kind: str  # "grounded" | "abstained"
    answer: GroundedAnswer | None
    abstention: Abstention | None
    redrafted: bool
    reports: list[VerificationReport]


def gate_and_assemble(draft_text: str, placements: Sequence[Placement],
                      packets: Sequence[EvidencePacket], corpus: Corpus,
                      providers, config: PipelineConfig | None = None,
                      render_language: str | None = None) -> AssemblyResult:
    config = config or PipelineConfig()
    by_id = {p.packet_id: p for p in packets}
    reports = []

    report = verify_draft(draft_text, packets, providers.support, config)
    reports.append(report)
    redrafted = False

    if report.decision == "flag":
        surviving: list[tuple[str, str]] = []
        for claim in report.claims:
            if not claim.supported:
                continue
            for placement in _claim_placements(claim.char_range, placements):
                packet = by_id.get(placement.packet_id)
                if packet is not None:
                    surviving.append((packet.packet_id, packet.spans[0].quote))
        if surviving:
            draft_text, placements = redraft(surviving, providers.draft)
            redrafted = True
            report = verify_draft(draft_text, packets, providers.support, config,
                                  redraft_attempted=True)
            reports.append(report)
        else:
            report.decision = "abstain"

    if report.decision == "accept":
        answer = _build_grounded(draft_text, placements, report, by_id, corpus,
                                 render_language)
        return AssemblyResult(kind="grounded", answer=answer, abstention=None,
                              redrafted=redrafted, reports=reports)

    abstention = build_abstention(report, packets, corpus, config)
    return AssemblyResult(kind="abstained", answer=None, abstention=abstention,
                          redrafted=redrafted, reports=reports)


def _claim_placements(char_range: tuple[int, int],
                      placements: Sequence[Placement]) -> list[Placement]:
    start, end = char_range
    return [p for p in placements if p.start < end and p.end > start]


def _build_grounded(draft_text: str, placements: Sequence[Placement],
                    report: VerificationReport, by_id: dict[str, EvidencePacket],
                    corpus: Corpus, render_language: str | None) -> GroundedAnswer:
    anchors: list[CitationAnchor] = []
    anchor_numbers: dict[str, int] = {}

    def number_for(packet: EvidencePacket) -> int:
        anchor = build_anchor(packet, corpus)
        if anchor.anchor_id not in anchor_numbers:
            anchor_numbers[anchor.anchor_id] = len(anchors) + 1
            anchors.append(anchor)
        return anchor_numbers[anchor.anchor_id]

    pieces: list[str] = []
    for claim in report.claims:
        packet_ids = [p.packet_id for p in _claim_placements(claim.char_range, placements)]
        if not packet_ids:
            packet_ids = list(claim.supporting_packet_ids[:1])
        numbers = []
        for pid in packet_ids:
            packet = by_id.get(pid)
            if packet is not None:
                n = number_for(packet)
                if n not in numbers:
                    numbers.append(n)
        pieces.append(_with_markers(claim.text, numbers))

    language = render_language or _source_language(anchors, corpus)
    return GroundedAnswer(
        text="".join(pieces),
        citations=anchors,
        render_language=language,
        verification=report,
    )


def _with_markers(claim_text: str, numbers: list[int]) -> str:
    if not numbers:
        return claim_text
    markers = "".join(f"[{n}]" for n in numbers)
    stripped_len = len(claim_text.rstrip())
    head, tail = claim_text[:stripped_len], claim_text[stripped_len:]
    if head and head[-1] in ".!?":
        return f"{head[:-1]} {markers}{head[-1]}{tail}"
    return f"{head} {markers}{tail}"


def _source_language(anchors: list[CitationAnchor], corpus: Corpus) -> str:
    for anchor in anchors:
        doc = corpus.documents.get(anchor.doc_id)
        if doc is not None:
            return doc.language
    return "en"


RATIONALE_BY_GAP = {
    "no_evidence": (
        "No documentary evidence in the corpus matches this question, so an "
        "answer cannot be grounded."
    ),
    "sparse_evidence": (
        "The retrieved evidence is too sparse to sustain a grounded answer "
        "(insufficient passages for the evidence threshold)."
    ),
    "low_agreement": (
        "Independent sources disagree on the supported claims, so a single "
        "grounded answer cannot be given."
    ),
    "low_coverage": (
        "Insufficient documentary support: too few claims in the drafted "
        "answer can be traced to corpus passages."
    ),
}


def classify_gap(report: VerificationReport, config: PipelineConfig) -> str:
    if not report.claims:
        return "no_evidence"
    if not report.evidence_sufficient:
        return "sparse_evidence"
    if report.agreement < config.agreement_min and any(c.supported for c in report.claims):
        return "low_agreement"
    return "low_coverage"


def build_abstention(report: VerificationReport, packets: Sequence[EvidencePacket],
                     corpus: Corpus, config: PipelineConfig) -> Abstention:
    gap = classify_gap(report, config)
    near_misses = near_miss_packets(packets, config)
    related: list[tuple[str, str]] = []
    seen_docs: set[str] = set()
    for packet in near_misses:
        if packet.doc_id in seen_docs:
            continue
        seen_docs.add(packet.doc_id)
        doc = corpus.documents.get(packet.doc_id)
        related.append((doc.title if doc else packet.doc_id, packet.doc_id))
        if len(related) >= 3:
            break

    refinements = ["Specify a region, year, or program to narrow the question."]
    for title, _doc_id in related:
        refinements.append(f"Broaden the question toward “{title}”.")
    return Abstention(
        rationale=RATIONALE_BY_GAP[gap],
        refinements=refinements,
        related_topics=related,
        verification=report,
    )


def near_miss_packets(packets: Sequence[EvidencePacket],
                      config: PipelineConfig) -> list[EvidencePacket]:
    """Packets that scored close to inclusion, best first."""
    floor = config.near_miss_floor
    return sorted(
        (p for p in packets if p.final_score >= floor),
        key=lambda p: (-p.final_score, p.packet_id),
    )
