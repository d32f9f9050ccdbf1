"""Tree walk: marginal-gain traversal of graph and vector neighborhoods.

Seeds come from each sub-query's planned strategy. Every step re-evaluates
the full frontier (structural neighbors of the selection plus the top
semantic candidates) and takes the candidate with the highest marginal
gain ``sim(c, subquery) - lambda * max_selected sim(c, s)``. The walk stops
when sub-query term coverage reaches the threshold, when gain stays below
epsilon for ``patience`` consecutive steps, or when the step budget runs
out.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from groundline.agents.types import RetrievalPlan, WalkStep, WalkTrace
from groundline.config import PipelineConfig
from groundline.index.search import Indexes, SearchFilters, cosine_normalized, lexical_normalized
from groundline.text import content_words


@dataclass
class Selection:
    """Nodes chosen for one plan, with per-sub-query base scores in [0, 1]."""

    entries: list[tuple[int, str, float]] = field(default_factory=list)
    _seen: set[tuple[int, str]] = field(default_factory=set, repr=False)

    def add(self, subquery_index: int, node_id: str, base_score: float) -> bool:
        key = (subquery_index, node_id)
        if key in self._seen:
            return False
        self._seen.add(key)
        self.entries.append((subquery_index, node_id, base_score))
        return True

    def nodes_for(self, subquery_index: int) -> list[str]:
        return [n for i, n, _ in self.entries if i == subquery_index]

    def __len__(self) -> int:
        return len(self.entries)


def _term_coverage(query_words: set[str], selected_words: set[str]) -> float:
    if not query_words:
        return 1.0
    return len(query_words & selected_words) / len(query_words)


def _normalized_seed_score(hit_score: float, source: str) -> float:
    if source == "lexical":
        return lexical_normalized(hit_score)
    if source == "semantic":
        return cosine_normalized(hit_score)
    return hit_score  # hybrid scores are already in [0, 1]


def walk(plan: RetrievalPlan, indexes: Indexes, config: PipelineConfig | None = None,
         preferred_docs: frozenset[str] = frozenset()) -> tuple[Selection, WalkTrace]:
    config = config or PipelineConfig()
    selection = Selection()
    trace = WalkTrace()
    budget = plan.step_budget
    boost = config.preferred_doc_boost

    n_nodes = indexes.vectors.size
    node_ids = indexes.vectors.node_ids
    node_pos = {n: i for i, n in enumerate(node_ids)}

    def boosted(node_id: str, score: float) -> float:
        if preferred_docs and indexes.corpus.node(node_id).doc_id in preferred_docs:
            return min(1.0, score + boost)
        return score

    for sq_index, (sq, sq_plan) in enumerate(zip(plan.subqueries, plan.per_subquery)):
        filters = SearchFilters(phrases=sq_plan.quoted_phrases)
        seeds = indexes.search(sq_plan.strategy, sq.text, sq_plan.top_k, filters)
        seed_scores = sorted(
            ((boosted(h.node_id, _normalized_seed_score(h.score, h.source)), h.node_id)
             for h in seeds),
            key=lambda pair: (-pair[0], pair[1]),
        )
        for score, node_id in seed_scores:
            selection.add(sq_index, node_id, score)

        if n_nodes == 0:
            trace.subquery_stops.append("budget_exhausted")
            continue

        query_words = content_words(sq.text)
        sims = indexes.vectors.matrix @ indexes._query_vector(sq.text)
        selected_mask = np.zeros(n_nodes, dtype=bool)
        covered_words: set[str] = set()
        max_sim_to_selected = np.full(n_nodes, -1.0)
        for node_id in selection.nodes_for(sq_index):
            pos = node_pos[node_id]
            selected_mask[pos] = True
            covered_words |= content_words(indexes.corpus.node(node_id).text)
            max_sim_to_selected = np.maximum(
                max_sim_to_selected, indexes.vectors.matrix @ indexes.vectors.matrix[pos])

        stop_reason = None
        stall = 0
        while True:
            if _term_coverage(query_words, covered_words) >= config.walk_coverage_threshold:
                stop_reason = "coverage_met"
                break
            if len(trace.steps) >= budget:
                stop_reason = "budget_exhausted"
                break

            candidates = _frontier(
                indexes, selection.nodes_for(sq_index), selected_mask,
                sims, node_ids, config.walk_semantic_pool)
            if not candidates:
                stop_reason = "budget_exhausted"
                break

            any_selected = bool(selected_mask.any())
            best = None
            for node_id, origin, anchor in candidates:
                pos = node_pos[node_id]
                novelty_penalty = float(max_sim_to_selected[pos]) if any_selected else 0.0
                gain = float(sims[pos]) - config.walk_lambda * novelty_penalty
                key = (-gain, node_id)
                if best is None or key < best[0]:
                    best = (key, node_id, origin, anchor, gain)

            _, node_id, origin, anchor, gain = best
            pos = node_pos[node_id]
            trace.steps.append(WalkStep(
                action=origin, from_node=anchor, to_node=node_id,
                marginal_gain=gain, subquery_index=sq_index,
            ))
            selection.add(sq_index, node_id, boosted(node_id, cosine_normalized(float(sims[pos]))))
            selected_mask[pos] = True
            covered_words |= content_words(indexes.corpus.node(node_id).text)
            max_sim_to_selected = np.maximum(
                max_sim_to_selected, indexes.vectors.matrix @ indexes.vectors.matrix[pos])

            if gain < config.walk_gain_epsilon:
                stall += 1
                if stall >= config.walk_stall_patience:
                    stop_reason = "gain_stalled"
                    break
            else:
                stall = 0

        trace.subquery_stops.append(stop_reason)

    if len(trace.steps) >= budget and trace.subquery_stops:
        trace.stop_reason = "budget_exhausted" \
            if "budget_exhausted" in trace.subquery_stops else trace.subquery_stops[-1]
    elif trace.subquery_stops:
        trace.stop_reason = trace.subquery_stops[-1]
    else:
        trace.stop_reason = "budget_exhausted"
    return selection, trace


def _frontier(indexes: Indexes, selected_nodes: list[str], selected_mask,
              sims, node_ids: list[str], semantic_pool: int) -> list[tuple[str, str, str | None]]:
    """Candidates as (node_id, action, anchor), structural moves first."""
    out: dict[str, tuple[str, str, str | None]] = {}
    for anchor in selected_nodes:
        for neighbor in indexes.graph.all_neighbors(anchor):
            if neighbor not in out:
                out[neighbor] = (neighbor, "structural_move", anchor)
    # Structural neighbors may already be selected; drop those.
    node_pos = {n: i for i, n in enumerate(node_ids)}
    out = {
        n: v for n, v in out.items() if not selected_mask[node_pos[n]]
    }
    if semantic_pool > 0:
        order = sorted(range(len(node_ids)), key=lambda i: (-float(sims[i]), node_ids[i]))
        added = 0
        for i in order:
            if added >= semantic_pool:
                break
            if selected_mask[i]:
                continue
            node_id = node_ids[i]
            if node_id not in out:
                nearest = _nearest_selected(indexes, node_id, selected_nodes)
                out[node_id] = (node_id, "semantic_jump", nearest)
            added += 1
    return sorted(out.values())


def _nearest_selected(indexes: Indexes, node_id: str, selected_nodes: list[str]) -> str | None:
    best = None
    best_key = None
    for s in selected_nodes:
        sim = indexes.node_similarity(node_id, s)
        key = (-sim, s)
        if best_key is None or key < best_key:
            best_key = key
            best = s
    return best
