"""Verification gate: claim segmentation, coverage/agreement scoring, decisions.

The verifier audits a draft and classifies it; it never rewrites content.
Coverage is the share of sentence-level claims with direct documentary
support. Agreement is cross-source consistency averaged over supported
claims. A draft is accepted only when every claim is supported and both
scores clear their thresholds; repairable drafts are flagged once, and
anything still failing after that one redraft cycle becomes an abstention.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from groundline.agents.types import EvidencePacket
from groundline.config import PipelineConfig
from groundline.text import count_tokens, sentence_spans


@dataclass
class Claim:
    claim_id: str
    text: str
    char_range: tuple[int, int]
    supported: bool = False
    supporting_packet_ids: list[str] = field(default_factory=list)
    consistency: float = 1.0

    def to_json(self) -> dict:
        return {
            "claim_id": self.claim_id,
            "text": self.text,
            "char_range": list(self.char_range),
            "supported": self.supported,
            "supporting_packet_ids": list(self.supporting_packet_ids),
            "consistency": self.consistency,
        }


@dataclass
class VerificationReport:
    draft_text: str
    claims: list[Claim]
    coverage: float
    agreement: float
    evidence_sufficient: bool
    decision: str = "abstain"
    flagged_claim_ids: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "coverage": self.coverage,
            "agreement": self.agreement,
            "decision": self.decision,
            "flagged_claim_ids": list(self.flagged_claim_ids),
            "evidence_sufficient": self.evidence_sufficient,
            "claims": [c.to_json() for c in self.claims],
        }


def segment_claims(draft_text: str) -> list[Claim]:
    """Sentence-level claims whose ranges tile the draft exactly."""
    claims = []
    for i, (start, end) in enumerate(sentence_spans(draft_text), start=1):
        claims.append(Claim(
            claim_id=f"c{i}", text=draft_text[start:end], char_range=(start, end)))
    return claims


def support(claim: Claim, packets: Sequence[EvidencePacket], provider,
            tau_support: float) -> tuple[bool, list[str]]:
    """Judge one claim against every packet; keep all meeting the threshold."""
    supporting = []
    for packet in packets:
        scores = provider.support(claim.text, [span.quote for span in packet.spans])
        if max(scores, default=0.0) >= tau_support:
            supporting.append(packet.packet_id)
    return bool(supporting), supporting


def score(claims: Sequence[Claim], packets: Sequence[EvidencePacket], provider,
          config: PipelineConfig | None = None, draft_text: str | None = None) -> VerificationReport:
    """Compute coverage, per-claim consistency, agreement, and sufficiency.

    Consistency is judged over cross-document pairs of a claim's supporting
    spans; claims supported by fewer than two distinct documents count as
    consistent (configurable to be excluded from the mean instead).
    """
    config = config or PipelineConfig()
    by_id = {p.packet_id: p for p in packets}
    total = len(claims)
    supported_claims = [c for c in claims if c.supported]
    coverage = len(supported_claims) / total if total else 0.0

    consistency_values = []
    for claim in claims:
        if not claim.supported:
            claim.consistency = 0.0
            continue
        supporting = [by_id[pid] for pid in claim.supporting_packet_ids if pid in by_id]
        doc_ids = {p.doc_id for p in supporting}
        if len(doc_ids) < 2:
            claim.consistency = 1.0
            if config.single_source_agreement:
                consistency_values.append(claim.consistency)
            continue
        pair_scores = []
        for i, left in enumerate(supporting):
            for right in supporting[i + 1:]:
                if left.doc_id == right.doc_id:
                    continue
                sim = max(
                    (float(s) for s in provider.support(
                        left.spans[0].quote, [span.quote for span in right.spans])),
                    default=0.0,
                )
                pair_scores.append(sim)
        mean_sim = sum(pair_scores) / len(pair_scores) if pair_scores else 0.0
        claim.consistency = 1.0 if mean_sim >= config.tau_agree else 0.0
        consistency_values.append(claim.consistency)

    if not supported_claims:
        agreement = 0.0
    elif consistency_values:
        agreement = sum(consistency_values) / len(consistency_values)
    else:
        # Every supported claim was single-source and excluded by config.
        agreement = 1.0

    packet_tokens = sum(
        count_tokens(span.quote) for p in packets for span in p.spans)
    evidence_sufficient = (
        len(packets) >= config.evidence_min_packets
        and packet_tokens >= config.evidence_min_tokens
    )
    return VerificationReport(
        draft_text=draft_text if draft_text is not None else "",
        claims=list(claims),
        coverage=coverage,
        agreement=agreement,
        evidence_sufficient=evidence_sufficient,
    )


def decide(report: VerificationReport, config: PipelineConfig | None = None,
           redraft_attempted: bool = False) -> str:
    """Pure accept/flag/abstain decision over a scored report.

    Acceptance requires every claim supported plus both scores above their
    thresholds. Failures that one redraft cycle cannot repair (insufficient
    evidence, low agreement, nothing supported at all) abstain immediately;
    repairable drafts flag their unsupported claims exactly once.
    """
    config = config or PipelineConfig()
    unsupported = [c.claim_id for c in report.claims if not c.supported]
    if not report.claims:
        decision = "abstain"
    elif not report.evidence_sufficient:
        decision = "abstain"
    elif report.agreement < config.agreement_min:
        decision = "abstain"
    elif not unsupported and report.coverage >= config.coverage_min:
        decision = "accept"
    elif report.coverage == 0.0 or redraft_attempted:
        decision = "abstain"
    else:
        decision = "flag"
    report.decision = decision
    report.flagged_claim_ids = unsupported if decision == "flag" else (
        unsupported if decision == "abstain" else [])
    return decision


def verify_draft(draft_text: str, packets: Sequence[EvidencePacket], provider,
                 config: PipelineConfig | None = None,
                 redraft_attempted: bool = False) -> VerificationReport:
    """Segment, judge support, score, and decide in one pass."""
    config = config or PipelineConfig()
    claims = segment_claims(draft_text)
    for claim in claims:
        claim.supported, claim.supporting_packet_ids = support(
            claim, packets, provider, config.tau_support)
    report = score(claims, packets, provider, config, draft_text=draft_text)
    decide(report, config, redraft_attempted=redraft_attempted)
    return report
