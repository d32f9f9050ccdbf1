"""Agentic retrieval: decomposition, planning, tree walk, evidence packets."""

from groundline.agents.decompose import decompose, plan
from groundline.agents.packets import best_sentence_span, draft_packets
from groundline.agents.types import (
    INTENTS,
    STOP_REASONS,
    STRATEGIES,
    EvidencePacket,
    EvidenceSpan,
    RetrievalPlan,
    SubQuery,
    SubQueryPlan,
    WalkStep,
    WalkTrace,
)
from groundline.agents.walk import Selection, walk

__all__ = [
    "EvidencePacket",
    "EvidenceSpan",
    "INTENTS",
    "RetrievalPlan",
    "STOP_REASONS",
    "STRATEGIES",
    "Selection",
    "SubQuery",
    "SubQueryPlan",
    "WalkStep",
    "WalkTrace",
    "best_sentence_span",
    "decompose",
    "draft_packets",
    "plan",
    "walk",
]
