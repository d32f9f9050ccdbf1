"""Decomposition, planning, tree-walk stopping rules, packet drafting."""

from __future__ import annotations

import math

import pytest

from groundline.agents import decompose, draft_packets, plan, walk
from groundline.agents.walk import Selection
from groundline.config import PipelineConfig
from groundline.index import build
from groundline.providers import stub_providers

from fixture_corpus import built_corpus, grid_document, scatter_document, scatter_ref_pairs


@pytest.fixture(scope="module")
def providers():
    return stub_providers()


def _plan_for(query, providers, config=None, session_context=()):
    subqueries = decompose(query, session_context, providers.decompose)
    return plan(subqueries, providers.plan, config or PipelineConfig())


# decompose / plan op contracts ---------------------------------------------------

def test_decompose_targets_must_occur_in_query_or_context(providers):
    subqueries = decompose("What is X?", (), providers.decompose)
    assert len(subqueries) == 1
    assert subqueries[0].intent == "factual"


def test_plan_assigns_exactly_one_strategy_each(providers):
    retrieval_plan = _plan_for(
        "Compare school feeding in Ghana and Kenya since 2015", providers)
    assert len(retrieval_plan.per_subquery) == len(retrieval_plan.subqueries) == 3
    for sq_plan in retrieval_plan.per_subquery:
        assert sq_plan.strategy in ("lexical", "semantic", "structural", "hybrid")
        assert sq_plan.top_k >= 1
    assert retrieval_plan.step_budget >= 1


def test_plan_quoted_phrases_verbatim(providers):
    retrieval_plan = _plan_for('Find the "school feeding scheme" budget', providers)
    for sq, sq_plan in zip(retrieval_plan.subqueries, retrieval_plan.per_subquery):
        for phrase in sq_plan.quoted_phrases:
            assert phrase in sq.text


# walk ------------------------------------------------------------------------

def test_single_matching_node_stops_on_coverage(providers):
    corpus, _ = built_corpus([{
        "doc_id": "one", "title": "t", "language": "en", "source_uri": "u",
        "page_count": 1,
        "blocks": [{"path": "1", "kind": "paragraph", "page": 1,
                    "text": "Solar tariffs fell sharply."}],
    }])
    indexes = build(corpus, providers.embed)
    retrieval_plan = _plan_for("solar tariffs fell", providers)
    selection, trace = walk(retrieval_plan, indexes)
    assert [n for _, n, _ in selection.entries] == [corpus.nodes[0].node_id]
    assert trace.stop_reason == "coverage_met"
    assert trace.steps == []


def test_lambda_zero_epsilon_inf_stalls_within_patience(providers):
    corpus, _ = built_corpus([grid_document(k) for k in range(6)])
    indexes = build(corpus, providers.embed)
    config = PipelineConfig(walk_lambda=0.0, walk_gain_epsilon=math.inf,
                            walk_stall_patience=3, walk_coverage_threshold=1.01)
    retrieval_plan = _plan_for("borehole chlorination aquifer sanitation unseen", providers,
                               config)
    selection, trace = walk(retrieval_plan, indexes, config)
    assert trace.stop_reason == "gain_stalled"
    assert len(trace.steps) <= 3


def test_walk_respects_budget(providers):
    corpus, _ = built_corpus([grid_document(k) for k in range(10)])
    indexes = build(corpus, providers.embed)
    config = PipelineConfig(walk_step_budget=4, walk_coverage_threshold=1.01,
                            walk_gain_epsilon=-math.inf)
    retrieval_plan = _plan_for("unmatchable zz terms qq", providers, config)
    _, trace = walk(retrieval_plan, indexes, config)
    assert len(trace.steps) <= 4
    assert trace.stop_reason == "budget_exhausted"


def test_empty_index_budget_exhausted_zero_steps(providers):
    corpus, _ = built_corpus([grid_document(0)])
    empty_corpus = corpus
    # Build an index over an empty node list by slicing the corpus down.
    empty_corpus.nodes = []
    empty_corpus.__post_init__()
    indexes = build(empty_corpus, providers.embed)
    retrieval_plan = _plan_for("anything", providers)
    selection, trace = walk(retrieval_plan, indexes)
    assert len(selection) == 0
    assert trace.steps == []
    assert trace.stop_reason == "budget_exhausted"


def test_gains_non_increasing_with_lambda_zero(providers):
    corpus, _ = built_corpus([grid_document(k) for k in range(8)])
    indexes = build(corpus, providers.embed)
    config = PipelineConfig(walk_lambda=0.0, walk_coverage_threshold=1.01,
                            walk_gain_epsilon=-math.inf, walk_step_budget=12)
    retrieval_plan = _plan_for("irrigation harvests seedling cooperatives", providers, config)
    _, trace = walk(retrieval_plan, indexes, config)
    gains = [s.marginal_gain for s in trace.steps if s.subquery_index == 0]
    assert gains == sorted(gains, reverse=True)


def test_scattered_evidence_needs_walk_not_flat_search(providers):
    """Three linked sections hold the answer; flat top-3 misses at least one."""
    decoys = []
    for i in range(2):
        decoys.append({
            "doc_id": f"decoy-{i}", "title": f"Decoy digest {i}", "language": "en",
            "source_uri": "u", "page_count": 1,
            "blocks": [{
                "path": "1", "kind": "paragraph", "page": 1,
                "text": "The fisheries levy and patrol boats feature in octopus landings "
                        f"summaries compiled for donors, volume {i}.",
            }],
        })
    corpus, _ = built_corpus([scatter_document()] + decoys)
    indexes = build(corpus, providers.embed, cross_ref_pairs=scatter_ref_pairs(corpus))
    by_path = {n.hier_path: n.node_id for n in corpus.doc_nodes("wb-scatter")}
    targets = {by_path["2.1"], by_path["3.1"], by_path["4.1"]}
    query = ("How did the fisheries levy fund patrol boats and what happened "
             "to octopus landings afterwards?")

    flat_top3 = {h.node_id for h in indexes.semantic_search(query, k=3)}
    assert len(targets - flat_top3) >= 1, "flat search should miss a section"

    config = PipelineConfig(walk_step_budget=12, walk_coverage_threshold=1.0,
                            default_top_k=3)
    providers_local = stub_providers(default_top_k=3)
    subqueries = decompose(query, (), providers_local.decompose)
    retrieval_plan = plan(subqueries, providers_local.plan, config)
    selection, trace = walk(retrieval_plan, indexes, config)
    selected = {n for _, n, _ in selection.entries}
    assert targets <= selected
    assert len(trace.steps) <= 12


# packets -----------------------------------------------------------------------

def _selection_for(corpus, entries):
    selection = Selection()
    for subquery_index, node_id, base in entries:
        selection.add(subquery_index, node_id, base)
    return selection


def test_identical_spans_same_doc_dedup(providers):
    doc = {
        "doc_id": "dup", "title": "t", "language": "en", "source_uri": "u",
        "page_count": 1,
        "blocks": [
            {"path": "1", "kind": "heading", "page": 1, "text": "Heading row"},
            {"path": "1.1", "kind": "paragraph", "page": 1,
             "text": "Grain silo credit totaled nine million."},
            {"path": "2", "kind": "heading", "page": 1, "text": "Annex"},
            {"path": "2.1", "kind": "paragraph", "page": 1,
             "text": "Grain silo credit totaled nine million."},
        ],
    }
    corpus, _ = built_corpus([doc])
    subqueries = decompose("grain silo credit totaled", (), providers.decompose)
    nodes = [n for n in corpus.nodes if n.kind == "paragraph"]
    selection = _selection_for(corpus, [(0, nodes[0].node_id, 0.9), (0, nodes[1].node_id, 0.7)])
    packets = draft_packets(selection, subqueries, corpus, providers.rerank)
    assert len(packets) == 1
    assert packets[0].base_score == 0.9


def test_identical_text_distinct_docs_kept(providers):
    docs = []
    for i in range(2):
        docs.append({
            "doc_id": f"side-{i}", "title": f"t{i}", "language": "en", "source_uri": "u",
            "page_count": 1,
            "blocks": [{"path": "1", "kind": "paragraph", "page": 1,
                        "text": "Grain silo credit totaled nine million."}],
        })
    corpus, _ = built_corpus(docs)
    subqueries = decompose("grain silo credit totaled", (), providers.decompose)
    selection = _selection_for(corpus, [
        (0, corpus.nodes[0].node_id, 0.8), (0, corpus.nodes[1].node_id, 0.8)])
    packets = draft_packets(selection, subqueries, corpus, providers.rerank)
    assert len(packets) == 2
    assert {p.doc_id for p in packets} == {"side-0", "side-1"}


def test_alpha_one_final_ranking_equals_base(providers):
    corpus, _ = built_corpus([grid_document(k) for k in range(4)])
    subqueries = decompose("enrollment feeding scheme budget", (), providers.decompose)
    entries = [(0, n.node_id, 0.1 * (i + 1)) for i, n in enumerate(corpus.nodes)
               if n.kind == "paragraph"]
    selection = _selection_for(corpus, entries)
    config = PipelineConfig(score_alpha=1.0, span_relevance_floor=0.0)
    packets = draft_packets(selection, subqueries, corpus, providers.rerank, config)
    finals = [p.final_score for p in packets]
    bases = [p.base_score for p in packets]
    assert finals == bases
    assert finals == sorted(finals, reverse=True)


def test_quotes_always_equal_node_slice(providers, corpus20=None):
    corpus, _ = built_corpus([grid_document(k) for k in range(12)])
    subqueries = decompose("school feeding scheme enrollment Ghana", (), providers.decompose)
    entries = [(0, n.node_id, 0.5) for n in corpus.nodes]
    selection = _selection_for(corpus, entries)
    config = PipelineConfig(span_relevance_floor=0.0)
    packets = draft_packets(selection, subqueries, corpus, providers.rerank, config)
    assert packets
    for packet in packets:
        span = packet.spans[0]
        node = corpus.node(span.node_id)
        assert node.text[span.char_range[0]:span.char_range[1]] == span.quote
        assert 0.0 <= packet.base_score <= 1.0
        assert 0.0 <= packet.rerank_score <= 1.0
        assert 0.0 <= packet.final_score <= 1.0


def test_empty_selection_empty_packets(providers):
    corpus, _ = built_corpus([grid_document(0)])
    subqueries = decompose("anything", (), providers.decompose)
    assert draft_packets(Selection(), subqueries, corpus, providers.rerank) == []


def test_packets_sorted_final_desc_then_id(providers):
    corpus, _ = built_corpus([grid_document(k) for k in range(6)])
    subqueries = decompose("million dollars total", (), providers.decompose)
    entries = [(0, n.node_id, 0.5) for n in corpus.nodes if n.kind == "paragraph"]
    selection = _selection_for(corpus, entries)
    config = PipelineConfig(span_relevance_floor=0.0)
    packets = draft_packets(selection, subqueries, corpus, providers.rerank, config)
    keys = [(-p.final_score, p.packet_id) for p in packets]
    assert keys == sorted(keys)
