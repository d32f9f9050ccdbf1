"""Query decomposition and retrieval planning operations.

The provider does the actual work (the stub is a documented rule table);
these functions validate its output against the stage contracts.
"""

from __future__ import annotations

from typing import Sequence

from groundline.agents.types import INTENTS, STRATEGIES, RetrievalPlan, SubQuery, SubQueryPlan
from groundline.config import PipelineConfig


def decompose(query_text: str, session_context: Sequence[str], provider) -> list[SubQuery]:
    if not query_text.strip():
        raise ValueError("query text must be non-empty")
    raw = provider.decompose(query_text, session_context)
    subqueries = []
    haystack = query_text + "\n" + "\n".join(session_context)
    for item in raw:
        intent = item["intent"]
        if intent not in INTENTS:
            raise ValueError(f"decomposer produced unknown intent {intent!r}")
        targets = tuple(t for t in item.get("targets", ()) if t in haystack)
        subqueries.append(SubQuery(text=item["text"], intent=intent, targets=targets))
    if not subqueries:
        subqueries = [SubQuery(text=query_text, intent="factual")]
    return subqueries


def plan(subqueries: Sequence[SubQuery], provider,
         config: PipelineConfig | None = None) -> RetrievalPlan:
    if not subqueries:
        raise ValueError("at least one sub-query is required")
    config = config or PipelineConfig()
    raw = provider.plan([
        {"text": sq.text, "intent": sq.intent, "targets": list(sq.targets)}
        for sq in subqueries
    ])
    per_subquery = []
    for sq, item in zip(subqueries, raw):
        strategy = item["strategy"]
        if strategy not in STRATEGIES:
            raise ValueError(f"planner produced unknown strategy {strategy!r}")
        phrases = tuple(p for p in item.get("quoted_phrases", ()) if p in sq.text)
        year_range = item.get("year_range")
        top_k = max(1, int(item.get("top_k", config.default_top_k)))
        per_subquery.append(SubQueryPlan(
            strategy=strategy,
            quoted_phrases=phrases,
            year_range=tuple(year_range) if year_range else None,
            top_k=top_k,
        ))
    return RetrievalPlan(
        subqueries=tuple(subqueries),
        per_subquery=tuple(per_subquery),
        step_budget=max(1, config.walk_step_budget),
    )
