"""Judge adapters: constant, scripted schedules, and remote rubric scoring."""

from __future__ import annotations

from typing import Mapping, Sequence

from groundline.evalharness.runner import JUDGE_PROMPT_TEMPLATE, EvalQuery, SystemResponse
from groundline.providers.base import SchemaViolation
from groundline.providers.stubs import JUDGE_DIMENSIONS, JUDGE_SCHEMA


class ConstantJudge:
    def __init__(self, judge_id: str, constant: int = 8):
        self.judge_id = judge_id
        self.constant = constant

    def score(self, query: EvalQuery, response: SystemResponse) -> dict:
        payload = {d: self.constant for d in JUDGE_DIMENSIONS}
        payload["comment"] = "Constant rubric score."
        return payload


class ScriptedJudge:
    """Replays a per-query schedule of dimension scores.

    ``schedule`` maps query id to a full score row; queries missing from the
    schedule fall back to per-dimension integer sequences (cycled), which is
    how recorded per-dimension averages are replayed exactly.
    """

    def __init__(self, judge_id: str,
                 schedule: Mapping[str, Mapping[str, int]] | None = None,
                 sequences: Mapping[str, Sequence[int]] | None = None):
        self.judge_id = judge_id
        self.schedule = dict(schedule or {})
        self.sequences = {d: list(v) for d, v in (sequences or {}).items()}
        self._position = 0

    def score(self, query: EvalQuery, response: SystemResponse) -> dict:
        if query.id in self.schedule:
            payload = dict(self.schedule[query.id])
            payload.setdefault("comment", "Scripted rubric score.")
            return payload
        if not self.sequences:
            raise SchemaViolation(f"no scripted scores for query {query.id}")
        payload = {}
        for dim in JUDGE_DIMENSIONS:
            seq = self.sequences[dim]
            payload[dim] = seq[self._position % len(seq)]
        self._position += 1
        payload["comment"] = "Scripted rubric score."
        return payload


class BrokenJudge:
    """Emits malformed payloads; exists to prove schema rejection is total."""

    def __init__(self, judge_id: str, mode: str = "missing"):
        self.judge_id = judge_id
        self.mode = mode

    def score(self, query: EvalQuery, response: SystemResponse) -> dict:
        payload = {d: 8 for d in JUDGE_DIMENSIONS}
        payload["comment"] = "broken"
        if self.mode == "missing":
            payload.pop("Coherence")
        elif self.mode == "extra":
            payload["verdict"] = "great"
        elif self.mode == "range":
            payload["Relevance"] = 0
        elif self.mode == "type":
            payload["Comprehensiveness"] = "eight"
        return payload


class RemoteJudge:
    """Rubric scoring through a remote completion provider."""

    def __init__(self, judge_id: str, provider):
        self.judge_id = judge_id
        self.provider = provider

    def score(self, query: EvalQuery, response: SystemResponse) -> dict:
        prompt = JUDGE_PROMPT_TEMPLATE.format(query=query.text, response=response.text)
        return self.provider.complete(prompt, JUDGE_SCHEMA)


def sequences_for_target_sums(target_sums: Mapping[str, int], n_queries: int) -> dict:
    """Integer score sequences whose per-dimension sums hit exact targets.

    For a target sum S over n queries, uses ``S % n`` scores of
    ``S // n + 1`` and the rest of ``S // n``; every value stays in [1, 10]
    for the sums this harness replays.
    """
    sequences = {}
    for dim, total in target_sums.items():
        base, extra = divmod(total, n_queries)
        if not 1 <= base <= 10 or (extra and base + 1 > 10):
            raise ValueError(f"target sum {total} for {dim} not representable")
        sequences[dim] = [base + 1] * extra + [base] * (n_queries - extra)
    return sequences
