"""End-to-end query pipeline: decompose, plan, walk, draft, gate, render.

With all-stub providers the pipeline is a pure function of
(corpus, config, query, session context): envelopes and traces serialize
byte-identically across runs. Timing metadata is therefore a set of
deterministic step counters; wall-clock latency belongs to the service log.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Sequence

from groundline.agents.decompose import decompose, plan
from groundline.agents.packets import draft_packets
from groundline.agents.walk import walk
from groundline.config import PipelineConfig
from groundline.envelope import Abstention, AnswerEnvelope
from groundline.index.search import Indexes
from groundline.providers.stubs import ProviderSet
from groundline.synthesize.assemble import build_abstention, gate_and_assemble
from groundline.synthesize.drafting import draft
from groundline.synthesize.rendering import render
from groundline.verify import VerificationReport, decide


@dataclass
class TraceData:
    trace_id: str
    query: str
    events: list[dict] = field(default_factory=list)
    profiles: list[dict] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "trace_id": self.trace_id,
            "query": self.query,
            "events": list(self.events),
            "profiles": list(self.profiles),
        }


def _trace_id(version_id: str, query: str, render_language: str | None,
              session_context: Sequence[str], config_fingerprint: str) -> str:
    payload = json.dumps({
        "corpus": version_id,
        "query": query,
        "render_language": render_language,
        "session_context": list(session_context),
        "config": config_fingerprint,
    }, sort_keys=True)
    return hashlib.blake2b(payload.encode("utf-8"), digest_size=16).hexdigest()


class QueryEngine:
    """Answers questions from one built corpus+index under one config."""

    def __init__(self, indexes: Indexes, providers: ProviderSet,
                 config: PipelineConfig | None = None):
        self.indexes = indexes
        self.corpus = indexes.corpus
        self.providers = providers
        self.config = config or PipelineConfig()

    def answer(self, query_text: str, session_context: Sequence[str] = (),
               render_language: str | None = None,
               preferred_docs: frozenset[str] = frozenset()) -> tuple[AnswerEnvelope, TraceData]:
        config = self.config
        trace = TraceData(
            trace_id=_trace_id(self.corpus.version.version_id, query_text,
                               render_language, session_context, config.fingerprint()),
            query=query_text,
            profiles=self.providers.profiles_json(),
        )

        subqueries = decompose(query_text, session_context, self.providers.decompose)
        trace.events.append({
            "type": "decomposition",
            "subqueries": [
                {"text": sq.text, "intent": sq.intent, "targets": list(sq.targets)}
                for sq in subqueries
            ],
        })

        retrieval_plan = plan(subqueries, self.providers.plan, config)
        trace.events.append({"type": "plan", "plan": retrieval_plan.to_json()})

        selection, walk_trace = walk(retrieval_plan, self.indexes, config,
                                     preferred_docs=preferred_docs)
        trace.events.append({"type": "walk", "trace": walk_trace.to_json(),
                             "selected": len(selection)})

        packets = draft_packets(selection, subqueries, self.corpus,
                                self.providers.rerank, config)
        trace.events.append({
            "type": "packets",
            "packets": [p.to_json() for p in packets],
        })

        timings = {
            "subqueries": len(subqueries),
            "walk_steps": len(walk_trace.steps),
            "packets": len(packets),
            "redrafts": 0,
        }

        if not packets:
            report = VerificationReport(
                draft_text="", claims=[], coverage=0.0, agreement=0.0,
                evidence_sufficient=False)
            decide(report, config)
            abstention = build_abstention(report, packets, self.corpus, config)
            envelope = self._finish_abstention(
                abstention, query_text, trace, timings, render_language)
            return envelope, trace

        draft_text, placements = draft(subqueries, packets, self.providers.draft, config)
        result = gate_and_assemble(draft_text, placements, packets, self.corpus,
                                   self.providers, config, render_language)
        timings["redrafts"] = 1 if result.redrafted else 0
        timings["claims"] = len(result.reports[-1].claims)
        for report in result.reports:
            trace.events.append({
                "type": "verification",
                "coverage": report.coverage,
                "agreement": report.agreement,
                "evidence_sufficient": report.evidence_sufficient,
                "decision": report.decision,
                "flagged_claim_ids": list(report.flagged_claim_ids),
            })

        if result.kind == "grounded":
            envelope = AnswerEnvelope(
                kind="grounded", query=query_text,
                corpus_version=self.corpus.version.version_id,
                trace_id=trace.trace_id, answer=result.answer, timings=timings,
            )
            render(envelope, render_language, self.providers.localize)
            trace.events.append({"type": "answer", "kind": "grounded",
                                 "citations": envelope.citation_count()})
            return envelope, trace

        envelope = self._finish_abstention(
            result.abstention, query_text, trace, timings, render_language)
        return envelope, trace

    def _finish_abstention(self, abstention: Abstention, query_text: str,
                           trace: TraceData, timings: dict,
                           render_language: str | None) -> AnswerEnvelope:
        envelope = AnswerEnvelope(
            kind="abstained", query=query_text,
            corpus_version=self.corpus.version.version_id,
            trace_id=trace.trace_id, abstention=abstention, timings=timings,
        )
        render(envelope, render_language, self.providers.localize)
        trace.events.append({"type": "answer", "kind": "abstained",
                             "rationale": abstention.rationale})
        return envelope
