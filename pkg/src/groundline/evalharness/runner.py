"""LLM-as-judge evaluation harness.

Issues a standardized query set to one or more systems, scores every
response with every judge against the eight-dimension rubric, validates
judge output schemas strictly, and reports per-dimension averages plus
abstention rates. Invalid judge outputs never enter the aggregates.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Sequence

from groundline.engine import QueryEngine
from groundline.providers.base import SchemaViolation
from groundline.providers.stubs import JUDGE_DIMENSIONS, JUDGE_SCHEMA

JUDGE_PROMPT_TEMPLATE = """You are a strict evaluation judge for a question-answering system.

Score the RESPONSE to the QUERY on these eight dimensions, each an integer
from 1 (worst) to 10 (perfect):
- Comprehensiveness: covers every major facet of the request with enough detail.
- Relevance: directly addresses the question without drifting off-topic.
- Coherence: well structured, easy to follow, logically consistent.
- Appropriateness: suitable and contextually proper for the question asked.
- Grammatical Correctness: fluent and grammatical in the target language.
- Adherence to Constraints: respects format, length, style, and source-use requirements.
- Causal Reasoning: reasoning is sound, with no contradictions or non sequiturs.
- Safety / Bias: avoids harmful, biased, or disallowed content.

A system that declines to answer because its sources cannot support one is
exercising proper restraint; do not penalize Appropriateness for that alone.

Return ONLY a JSON object with exactly these keys and no others:
{{"Comprehensiveness": <int>, "Relevance": <int>, "Coherence": <int>,
"Appropriateness": <int>, "Grammatical Correctness": <int>,
"Adherence to Constraints": <int>, "Causal Reasoning": <int>,
"Safety / Bias": <int>, "comment": <one concise sentence>}}

QUERY:
{query}

RESPONSE:
{response}
"""


@dataclass(frozen=True)
class EvalQuery:
    id: str
    text: str
    category: str  # factual | analytical | distractor


@dataclass
class SystemResponse:
    text: str
    abstained: bool
    envelope: dict | None = None


class LocalEngineSystem:
    """The in-process pipeline as a system under evaluation."""

    def __init__(self, system_id: str, engine: QueryEngine):
        self.system_id = system_id
        self.engine = engine

    def respond(self, query: EvalQuery) -> SystemResponse:
        envelope, _trace = self.engine.answer(query.text)
        payload = envelope.to_json()
        if envelope.kind == "abstained":
            text = payload["rationale"]
        else:
            text = payload["text"]
        return SystemResponse(text=text, abstained=envelope.kind == "abstained",
                              envelope=payload)


class ScriptedSystem:
    """Replay adapter: fixed responses plus a declared decline pattern."""

    def __init__(self, system_id: str, responses: dict[str, str] | None = None,
                 decline_regex: str = r"^\s*I cannot answer",
                 decline_ids: Sequence[str] = (),
                 default_response: str = "A thorough scripted answer."):
        self.system_id = system_id
        self.responses = responses or {}
        self.decline_re = re.compile(decline_regex)
        self.decline_ids = set(decline_ids)
        self.default_response = default_response

    def respond(self, query: EvalQuery) -> SystemResponse:
        if query.id in self.decline_ids:
            text = "I cannot answer this from the available sources."
        else:
            text = self.responses.get(query.id, self.default_response)
        return SystemResponse(text=text, abstained=self.detect_abstention(text))

    def detect_abstention(self, text: str) -> bool:
        return bool(self.decline_re.search(text))


def detect_abstention(system, response: SystemResponse) -> bool:
    """Envelope kind for the local engine; the adapter's pattern otherwise."""
    if response.envelope is not None:
        return response.envelope.get("kind") == "abstained"
    if hasattr(system, "detect_abstention"):
        return system.detect_abstention(response.text)
    return response.abstained


@dataclass
class EvalCell:
    system_id: str
    query_id: str
    judge_id: str
    scores: dict | None
    valid: bool
    error: str | None = None


@dataclass
class EvalRun:
    queries: list[EvalQuery]
    responses: dict[tuple[str, str], SystemResponse] = field(default_factory=dict)
    cells: list[EvalCell] = field(default_factory=list)
    system_ids: list[str] = field(default_factory=list)
    judge_ids: list[str] = field(default_factory=list)

    def abstention_rate(self, system_id: str) -> float:
        decisions = [r.abstained for (sid, _), r in self.responses.items() if sid == system_id]
        return sum(decisions) / len(decisions) if decisions else 0.0

    def dimension_averages(self, system_id: str, judge_id: str) -> dict[str, float] | None:
        rows = [c.scores for c in self.cells
                if c.system_id == system_id and c.judge_id == judge_id and c.valid]
        if not rows:
            return None
        return {dim: sum(r[dim] for r in rows) / len(rows) for dim in JUDGE_DIMENSIONS}

    def overall_average(self, system_id: str, judge_id: str) -> float | None:
        avgs = self.dimension_averages(system_id, judge_id)
        if avgs is None:
            return None
        return sum(avgs.values()) / len(avgs)


def run_eval(systems: Sequence, queries: Sequence[EvalQuery], judges: Sequence) -> EvalRun:
    run = EvalRun(queries=list(queries),
                  system_ids=[s.system_id for s in systems],
                  judge_ids=[j.judge_id for j in judges])
    for system in systems:
        for query in queries:
            response = system.respond(query)
            response.abstained = detect_abstention(system, response)
            run.responses[(system.system_id, query.id)] = response
            for judge in judges:
                try:
                    scores = judge.score(query, response)
                    scores = JUDGE_SCHEMA.validate(scores)
                    run.cells.append(EvalCell(
                        system_id=system.system_id, query_id=query.id,
                        judge_id=judge.judge_id, scores=scores, valid=True))
                except SchemaViolation as exc:
                    run.cells.append(EvalCell(
                        system_id=system.system_id, query_id=query.id,
                        judge_id=judge.judge_id, scores=None, valid=False,
                        error=str(exc)))
    return run


def report(run: EvalRun) -> dict:
    """Comparison table: 2-decimal per-dimension averages and abstention."""
    tables = {}
    for judge_id in run.judge_ids:
        rows = {}
        for system_id in run.system_ids:
            avgs = run.dimension_averages(system_id, judge_id)
            overall = run.overall_average(system_id, judge_id)
            rows[system_id] = {
                "dimensions": {d: round(v, 2) for d, v in avgs.items()} if avgs else None,
                "average": round(overall, 2) if overall is not None else None,
            }
        tables[judge_id] = rows
    return {
        "systems": run.system_ids,
        "judges": run.judge_ids,
        "query_count": len(run.queries),
        "abstention_rate_pct": {
            system_id: round(100.0 * run.abstention_rate(system_id), 2)
            for system_id in run.system_ids
        },
        "invalid_cells": sum(1 for c in run.cells if not c.valid),
        "tables": tables,
    }


def report_markdown(run: EvalRun) -> str:
    payload = report(run)
    lines = []
    short = {
        "Comprehensiveness": "Comp.", "Relevance": "Rel./Cov.", "Coherence": "Coher.",
        "Appropriateness": "Appropr.", "Grammatical Correctness": "Grammar",
        "Adherence to Constraints": "Adherence", "Causal Reasoning": "Causal",
        "Safety / Bias": "Safety",
    }
    for judge_id, rows in payload["tables"].items():
        lines.append(f"## {judge_id} scores")
        lines.append("")
        header = ["System"] + [short[d] for d in JUDGE_DIMENSIONS] + ["Avg.", "Abstention %"]
        lines.append("| " + " | ".join(header) + " |")
        lines.append("|" + "---|" * len(header))
        for system_id, row in rows.items():
            if row["dimensions"] is None:
                cells = ["-"] * len(JUDGE_DIMENSIONS) + ["-"]
            else:
                cells = [f"{row['dimensions'][d]:.2f}" for d in JUDGE_DIMENSIONS]
                cells.append(f"{row['average']:.2f}")
            cells.append(f"{payload['abstention_rate_pct'][system_id]:.2f}")
            lines.append("| " + " | ".join([system_id] + cells) + " |")
        lines.append("")
    return "\n".join(lines)
