"""Types for the agentic retrieval stage."""

from __future__ import annotations

from dataclasses import dataclass, field

INTENTS = ("factual", "analytical", "comparative")
STRATEGIES = ("lexical", "semantic", "structural", "hybrid")
STOP_REASONS = ("coverage_met", "gain_stalled", "budget_exhausted")


@dataclass(frozen=True)
class SubQuery:
    text: str
    intent: str
    targets: tuple[str, ...] = ()


@dataclass(frozen=True)
class SubQueryPlan:
    strategy: str
    quoted_phrases: tuple[str, ...] = ()
    year_range: tuple[int, int | None] | None = None
    top_k: int = 5


@dataclass(frozen=True)
class RetrievalPlan:
    subqueries: tuple[SubQuery, ...]
    per_subquery: tuple[SubQueryPlan, ...]
    step_budget: int

    def to_json(self) -> dict:
        return {
            "subqueries": [
                {"text": sq.text, "intent": sq.intent, "targets": list(sq.targets)}
                for sq in self.subqueries
            ],
            "per_subquery": [
                {
                    "strategy": p.strategy,
                    "quoted_phrases": list(p.quoted_phrases),
                    "year_range": list(p.year_range) if p.year_range else None,
                    "top_k": p.top_k,
                }
                for p in self.per_subquery
            ],
            "step_budget": self.step_budget,
        }


@dataclass(frozen=True)
class WalkStep:
    action: str          # structural_move | semantic_jump
    from_node: str | None
    to_node: str
    marginal_gain: float
    subquery_index: int

    def to_json(self) -> dict:
        return {
            "action": self.action,
            "from_node": self.from_node,
            "to_node": self.to_node,
            "marginal_gain": self.marginal_gain,
            "subquery_index": self.subquery_index,
        }


@dataclass
class WalkTrace:
    steps: list[WalkStep] = field(default_factory=list)
    stop_reason: str = "budget_exhausted"
    subquery_stops: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "steps": [s.to_json() for s in self.steps],
            "stop_reason": self.stop_reason,
            "subquery_stops": list(self.subquery_stops),
        }


@dataclass(frozen=True)
class EvidenceSpan:
    node_id: str
    char_range: tuple[int, int]
    quote: str


@dataclass(frozen=True)
class EvidencePacket:
    packet_id: str
    subquery_index: int
    spans: tuple[EvidenceSpan, ...]
    base_score: float
    rerank_score: float
    final_score: float
    doc_id: str
    hier_path: str
    page: int

    def to_json(self) -> dict:
        return {
            "packet_id": self.packet_id,
            "subquery_index": self.subquery_index,
            "spans": [
                {"node_id": s.node_id, "char_range": list(s.char_range), "quote": s.quote}
                for s in self.spans
            ],
            "base_score": self.base_score,
            "rerank_score": self.rerank_score,
            "final_score": self.final_score,
            "provenance": {
                "doc_id": self.doc_id, "hier_path": self.hier_path, "page": self.page,
            },
        }
