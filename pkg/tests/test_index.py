"""Graph construction, search-vs-oracle equivalence, persistence determinism."""

from __future__ import annotations

import json
import random

import pytest

from groundline.corpus import build_corpus, ingest
from groundline.index import (
    SearchFilters,
    UnknownNodeError,
    brute_force_lexical,
    brute_force_semantic,
    build,
    load_indexes,
    save_indexes,
)
from groundline.providers import stub_providers

from fixture_corpus import (
    COUNTRIES,
    built_corpus,
    grid_document,
    scatter_ref_pairs,
    to_jsonl,
)


def _hit_ids(hits):
    return [h.node_id for h in hits]


# graph ------------------------------------------------------------------------

def test_single_node_corpus_graph_empty():
    corpus, _ = built_corpus([{
        "doc_id": "solo", "title": "t", "language": "en", "source_uri": "u",
        "page_count": 1,
        "blocks": [{"path": "1", "kind": "paragraph", "page": 1, "text": "Only text here."}],
    }])
    providers = stub_providers()
    indexes = build(corpus, providers.embed)
    assert indexes.graph.edge_count() == 0
    assert indexes.lexical.size == 1
    assert indexes.vectors.size == 1


def test_parent_edges_are_longest_proper_prefix(indexes20, corpus20):
    """Recompute prefixes independently and compare with graph parents."""
    for doc_id in corpus20.documents:
        nodes = corpus20.doc_nodes(doc_id)
        paths = {}
        for node in nodes:
            paths.setdefault(node.hier_path, node.node_id)
        for node in nodes:
            segments = node.hier_path.split(".")
            expected = None
            for cut in range(len(segments) - 1, 0, -1):
                prefix = ".".join(segments[:cut])
                if prefix in paths:
                    expected = paths[prefix]
                    break
            got = indexes20.graph.parent.get(node.node_id)
            assert got == expected, (doc_id, node.hier_path)


def test_root_heading_has_no_parent(indexes20, corpus20):
    roots = [n for n in corpus20.doc_nodes("wb-000") if n.hier_path == "1"]
    assert indexes20.neighbors(roots[0].node_id, "parent") == []


def test_children_are_direct_path_extensions(indexes20, corpus20):
    scatter_nodes = {n.hier_path: n for n in corpus20.doc_nodes("wb-scatter")}
    children = indexes20.neighbors(scatter_nodes["2"].node_id, "child")
    child_paths = {corpus20.node(c).hier_path for c in children}
    assert child_paths == {"2.1"}


def test_cross_refs_symmetric(indexes20, corpus20):
    for a, b in scatter_ref_pairs(corpus20):
        assert b in indexes20.neighbors(a, "cross_ref")
        assert a in indexes20.neighbors(b, "cross_ref")


def test_neighbors_unknown_node_errors(indexes20):
    with pytest.raises(UnknownNodeError):
        indexes20.neighbors("no-such-node", "parent")


def test_sibling_order_consistent_with_byte_ranges(indexes20, corpus20):
    for doc_id in corpus20.documents:
        for node in corpus20.doc_nodes(doc_id):
            for nxt in indexes20.neighbors(node.node_id, "next_sibling"):
                assert corpus20.node(nxt).byte_range[0] > node.byte_range[0]


# lexical search ------------------------------------------------------------------

def test_query_of_full_node_text_ranks_first(indexes20, corpus20):
    node = corpus20.doc_nodes("wb-000")[1]
    hits = indexes20.lexical_search(node.text, k=5)
    assert hits[0].node_id == node.node_id


def test_absent_token_returns_empty(indexes20):
    assert indexes20.lexical_search("zzyzzx", k=5) == []


def test_empty_query_returns_empty(indexes20):
    assert indexes20.lexical_search("  !!! ", k=5) == []


def test_lexical_matches_bruteforce_on_fixture(indexes20, corpus20):
    hits = indexes20.lexical_search("school feeding program", k=10)
    oracle = brute_force_lexical(corpus20, "school feeding program", k=10)
    assert _hit_ids(hits) == _hit_ids(oracle)
    for got, want in zip(hits, oracle):
        assert got.score == pytest.approx(want.score, rel=1e-12)


def test_semantic_identical_text_ranks_first(indexes20, corpus20):
    node = corpus20.doc_nodes("wb-003")[1]
    hits = indexes20.semantic_search(node.text, k=3)
    assert hits[0].node_id == node.node_id
    assert hits[0].score == pytest.approx(1.0, abs=1e-9)


def test_semantic_k_larger_than_corpus_returns_all(indexes20, corpus20):
    hits = indexes20.semantic_search("anything at all", k=10_000)
    assert len(hits) == len(corpus20.nodes)
    scores = [h.score for h in hits]
    assert scores == sorted(scores, reverse=True)


def test_semantic_top5_matches_bruteforce(indexes20, corpus20, providers):
    query = "solar electricity for villages"
    hits = indexes20.semantic_search(query, k=5)
    oracle = brute_force_semantic(corpus20, query, k=5, embed_provider=providers.embed)
    assert _hit_ids(hits) == _hit_ids(oracle)


# filters ---------------------------------------------------------------------

def test_doc_filter_soundness(indexes20, corpus20):
    filters = SearchFilters(doc_ids=frozenset({"wb-001", "wb-002"}))
    for hit in indexes20.lexical_search("assessment for", k=50, filters=filters):
        assert corpus20.node(hit.node_id).doc_id in {"wb-001", "wb-002"}


def test_page_filter_soundness(indexes20, corpus20):
    filters = SearchFilters(page_range=(3, 3))
    for hit in indexes20.semantic_search("readiness points", k=50, filters=filters):
        assert corpus20.node(hit.node_id).page == 3


def test_phrase_filter_soundness(indexes20, corpus20):
    filters = SearchFilters(phrases=("school feeding scheme",))
    hits = indexes20.lexical_search("school feeding", k=50, filters=filters)
    assert hits
    for hit in hits:
        assert "school feeding scheme" in " ".join(corpus20.node(hit.node_id).text.lower().split())


def test_topk_prefix_of_topk_plus_one(indexes20):
    q = "enrollment districts budget"
    top5 = _hit_ids(indexes20.lexical_search(q, k=5))
    top6 = _hit_ids(indexes20.lexical_search(q, k=6))
    assert top6[:5] == top5


# random-corpus oracle equivalence ------------------------------------------------

def _random_corpus(rng: random.Random, n_docs: int):
    vocab = [f"term{i}" for i in range(40)] + [c.lower() for c in COUNTRIES]
    records = []
    for d in range(n_docs):
        n_blocks = rng.randint(1, 6)
        blocks = [{"path": "1", "kind": "heading", "page": 1,
                   "text": " ".join(rng.choices(vocab, k=3)).capitalize()}]
        for i in range(1, n_blocks):
            words = " ".join(rng.choices(vocab, k=rng.randint(3, 30)))
            blocks.append({"path": f"1.{i}", "kind": "paragraph",
                           "page": rng.randint(1, 3), "text": words.capitalize() + "."})
        records.append({
            "doc_id": f"r{d}", "title": f"doc {d}", "language": "en",
            "source_uri": "u", "page_count": 3, "blocks": blocks,
        })
    docs, report = ingest(to_jsonl(records).splitlines())
    assert not report.rejected
    return build_corpus(docs)


def test_oracle_equivalence_random_corpora():
    rng = random.Random(20260810)
    providers = stub_providers()
    for trial in range(8):
        corpus = _random_corpus(rng, rng.randint(1, 8))
        indexes = build(corpus, providers.embed)
        for _ in range(5):
            query = " ".join(rng.choices([f"term{i}" for i in range(40)], k=rng.randint(1, 5)))
            k = rng.randint(1, 12)
            assert _hit_ids(indexes.lexical_search(query, k)) == _hit_ids(
                brute_force_lexical(corpus, query, k))
            assert _hit_ids(indexes.semantic_search(query, k)) == _hit_ids(
                brute_force_semantic(corpus, query, k, providers.embed))


# persistence -------------------------------------------------------------------

def test_persisted_index_files_byte_identical(tmp_path, corpus20, providers):
    pairs = scatter_ref_pairs(corpus20)
    dir_a, dir_b = tmp_path / "a", tmp_path / "b"
    save_indexes(build(corpus20, providers.embed, cross_ref_pairs=pairs), dir_a)
    save_indexes(build(corpus20, providers.embed, cross_ref_pairs=pairs), dir_b)
    for name in ("header.json", "node_ids.json", "graph.json", "lexical.json", "vectors.npy"):
        assert (dir_a / name).read_bytes() == (dir_b / name).read_bytes(), name


def test_load_roundtrip_preserves_search(tmp_path, corpus20, providers, indexes20):
    out = tmp_path / "idx"
    save_indexes(indexes20, out)
    loaded = load_indexes(out, corpus20, providers.embed)
    q = "curriculum modernization budget"
    assert _hit_ids(loaded.lexical_search(q, 5)) == _hit_ids(indexes20.lexical_search(q, 5))
    assert _hit_ids(loaded.semantic_search(q, 5)) == _hit_ids(indexes20.semantic_search(q, 5))


def test_load_rejects_version_mismatch(tmp_path, indexes20, providers):
    out = tmp_path / "idx"
    save_indexes(indexes20, out)
    other, _ = built_corpus([grid_document(55)])
    with pytest.raises(ValueError, match="built for corpus"):
        load_indexes(out, other, providers.embed)


def test_header_pins_corpus_version(tmp_path, indexes20, corpus20):
    out = tmp_path / "idx"
    save_indexes(indexes20, out)
    header = json.loads((out / "header.json").read_text())
    assert header["corpus_version"] == corpus20.version.version_id
    assert header["bm25"] == {"k1": 1.2, "b": 0.75}
