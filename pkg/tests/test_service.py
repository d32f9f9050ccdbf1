"""Service endpoints: query flow, citations, notes, export, metrics."""

from __future__ import annotations

import datetime as dt
import itertools
import json

import pytest
from fastapi.testclient import TestClient

from groundline.engine import QueryEngine
from groundline.index import build
from groundline.service import CorpusRegistry, ServiceStore, abstention_series, create_app
from groundline.service.storage import QueryLogEntry

from conftest import fixture_config
from fixture_corpus import built_corpus, fixture20_documents, scatter_ref_pairs

GROUNDED_QUERY = "How did the school feeding scheme in Ghana change enrollment between 2012 and 2018?"


@pytest.fixture()
def service(tmp_path, indexes20, providers):
    engine = QueryEngine(indexes20, providers, fixture_config())
    store = ServiceStore(tmp_path / "store.db", tmp_path / "logs.jsonl")
    ticks = itertools.count()
    clock = lambda: dt.datetime(2026, 5, 12, tzinfo=dt.timezone.utc) + dt.timedelta(
        minutes=next(ticks))
    app = create_app(engine, store, clock=clock)
    client = TestClient(app)
    return client, store, app


def _session(client, user="researcher@example.org", **kwargs):
    response = client.post("/v1/sessions", json={"user": user, **kwargs})
    assert response.status_code == 201
    return response.json()["session_id"]


def test_grounded_query_returns_envelope_and_trace(service):
    client, store, _ = service
    session_id = _session(client)
    response = client.post("/v1/query", json={"text": GROUNDED_QUERY, "session_id": session_id})
    assert response.status_code == 200
    envelope = response.json()
    assert envelope["kind"] == "grounded"
    assert len(envelope["citations"]) >= 1
    trace = client.get(f"/v1/traces/{envelope['trace_id']}")
    assert trace.status_code == 200
    events = [e["type"] for e in trace.json()["events"]]
    assert "decomposition" in events and "plan" in events and "verification" in events


def test_out_of_domain_query_abstains(service):
    client, _, _ = service
    session_id = _session(client)
    response = client.post("/v1/query", json={
        "text": "Write me a pizza recipe from the policy files.", "session_id": session_id})
    assert response.status_code == 200
    envelope = response.json()
    assert envelope["kind"] == "abstained"
    assert envelope["rationale"]
    assert len(envelope["refinements"]) >= 1


def test_same_query_twice_byte_identical_two_log_entries(service):
    client, store, _ = service
    session_id = _session(client)
    body = {"text": GROUNDED_QUERY, "session_id": session_id}
    first = client.post("/v1/query", json=body)
    second = client.post("/v1/query", json=body)
    assert first.content == second.content
    logs = store.all_logs()
    assert len(logs) == 2
    assert all(entry.query == GROUNDED_QUERY for entry in logs)


def test_empty_text_400_unknown_session_404_rebuilding_409(service):
    client, _, app = service
    session_id = _session(client)
    assert client.post("/v1/query", json={"text": "  ", "session_id": session_id}).status_code == 400
    assert client.post("/v1/query", json={"text": "x", "session_id": "nope"}).status_code == 404
    app.state.rebuilding = True
    response = client.post("/v1/query", json={"text": "x", "session_id": session_id})
    assert response.status_code == 409
    app.state.rebuilding = False


def test_citation_endpoint_resolves_quote_and_context(service, indexes20):
    client, _, _ = service
    session_id = _session(client)
    envelope = client.post("/v1/query", json={
        "text": GROUNDED_QUERY, "session_id": session_id}).json()
    corpus = indexes20.corpus
    for anchor in envelope["citations"]:
        payload = client.get(f"/v1/citations/{anchor['anchor_id']}").json()
        assert payload["quote"] == anchor["quote"]
        assert payload["page"] == anchor["page"]
        start, end = payload["context_byte_range"]
        assert corpus.slice_bytes(payload["doc_id"], start, end) == payload["context_window"]
        assert anchor["quote"] in payload["context_window"]


def test_citation_context_at_document_start(service, indexes20, corpus20):
    client, store, _ = service
    session_id = _session(client)
    envelope = client.post("/v1/query", json={
        "text": GROUNDED_QUERY, "session_id": session_id}).json()
    # Synthesize an anchor at byte zero of the cited document.
    doc_id = envelope["citations"][0]["doc_id"]
    node = corpus20.doc_nodes(doc_id)[0]
    store.put_anchors("t-test", corpus20.version.version_id, [{
        "anchor_id": "a" * 32, "node_id": node.node_id, "doc_id": doc_id,
        "page": node.page, "byte_range": [0, node.byte_range[1]], "quote": node.text,
    }])
    payload = client.get(f"/v1/citations/{'a' * 32}").json()
    assert payload["context_byte_range"][0] == 0


def test_unknown_anchor_404(service):
    client, _, _ = service
    assert client.get("/v1/citations/" + "0" * 32).status_code == 404


def test_document_endpoint_serves_blocks_with_byte_ranges(service, corpus20):
    client, _, _ = service
    payload = client.get("/v1/documents/wb-000").json()
    assert payload["title"] == corpus20.documents["wb-000"].title
    raw = corpus20.canonical_bytes("wb-000")
    for block in payload["blocks"]:
        start, end = block["byte_range"]
        assert raw[start:end].decode("utf-8") == block["text"]
    assert client.get("/v1/documents/nope").status_code == 404
    assert client.get("/v1/documents/wb-000",
                      params={"version": "f" * 32}).status_code == 409


def test_notes_save_tag_export_roundtrip(service):
    client, _, _ = service
    session_id = _session(client)
    envelope = client.post("/v1/query", json={
        "text": GROUNDED_QUERY, "session_id": session_id}).json()
    note = client.post("/v1/notes", json={
        "session_id": session_id, "envelope_ref": envelope["trace_id"],
        "tags": ["education"]})
    assert note.status_code == 201
    note_id = note.json()["note_id"]

    tag = client.post(f"/v1/notes/{note_id}/tags", json={
        "session_id": session_id, "tags": ["ghana"]})
    assert tag.status_code == 200
    listing = client.get("/v1/notes", params={"session_id": session_id}).json()["notes"]
    assert listing[0]["tags"] == ["education", "ghana"]

    export = client.get(f"/v1/export/{session_id}")
    assert export.status_code == 200
    bundle = export.json()["notes"]
    assert len(bundle) == 1
    markdown = bundle[0]["markdown"]
    sidecar = bundle[0]["sidecar"]
    assert sidecar["corpus_version"] == envelope["corpus_version"]
    marker_count = markdown.count("[1]")
    assert marker_count >= 2  # inline marker plus the citation list row
    assert len(sidecar["anchors"]) == len(envelope["citations"])
    assert all(anchor["resolved"] for anchor in sidecar["anchors"])


def test_cross_session_note_access_forbidden(service):
    client, _, _ = service
    session_a = _session(client, user="a@example.org")
    session_b = _session(client, user="b@example.org")
    envelope = client.post("/v1/query", json={
        "text": GROUNDED_QUERY, "session_id": session_a}).json()
    response = client.post("/v1/notes", json={
        "session_id": session_b, "envelope_ref": envelope["trace_id"], "tags": []})
    assert response.status_code == 403


def test_export_resolves_against_pinned_version_after_rebuild(tmp_path, providers):
    """Rebuild with changed text: the note's pinned version keeps resolving."""
    records_v1 = fixture20_documents()
    corpus_v1, _ = built_corpus(records_v1)
    indexes_v1 = build(corpus_v1, providers.embed, cross_ref_pairs=scatter_ref_pairs(corpus_v1))

    records_v2 = fixture20_documents()
    records_v2[0]["blocks"][1]["text"] += " Revised edition."
    corpus_v2, _ = built_corpus(records_v2)
    indexes_v2 = build(corpus_v2, providers.embed, cross_ref_pairs=scatter_ref_pairs(corpus_v2))
    assert corpus_v1.version.version_id != corpus_v2.version.version_id

    store = ServiceStore(tmp_path / "store.db")
    engine_v1 = QueryEngine(indexes_v1, providers, fixture_config())
    registry = CorpusRegistry()
    registry.add(indexes_v2)  # the rebuilt corpus is also loaded
    app = create_app(engine_v1, store, registry=registry)
    client = TestClient(app)

    session_id = _session(client)
    envelope = client.post("/v1/query", json={
        "text": GROUNDED_QUERY, "session_id": session_id}).json()
    assert envelope["kind"] == "grounded"
    note = client.post("/v1/notes", json={
        "session_id": session_id, "envelope_ref": envelope["trace_id"], "tags": []})
    assert note.status_code == 201

    export = client.get(f"/v1/export/{session_id}")
    assert export.status_code == 200
    anchors = export.json()["notes"][0]["sidecar"]["anchors"]
    assert anchors and all(a["resolved"] for a in anchors)


def test_citation_count_in_log_matches_envelope(service):
    client, store, _ = service
    session_id = _session(client)
    envelope = client.post("/v1/query", json={
        "text": GROUNDED_QUERY, "session_id": session_id}).json()
    entry = store.all_logs()[-1]
    assert entry.citations == len(envelope["citations"])
    assert entry.kind == "grounded"


def test_logs_are_pseudonymous(service):
    client, store, _ = service
    session_id = _session(client, user="person@example.org")
    client.post("/v1/query", json={"text": GROUNDED_QUERY, "session_id": session_id})
    entry = store.all_logs()[-1]
    assert "person@example.org" not in entry.user_hash
    assert len(entry.user_hash) == 32


def test_metrics_bucketing():
    def entry(day, kind):
        return QueryLogEntry(
            ts=f"2026-05-{day:02d}T10:00:00+00:00", session_id="s", user_hash="u",
            query="q", language="en", kind=kind, citations=0, latency_ms=1)

    logs = [entry(1, "abstained")] * 4 + [entry(2, "grounded")] * 6
    series = abstention_series(logs, 5)
    assert len(series) == 1
    assert series[0]["total"] == 10
    assert series[0]["abstention_pct"] == 40.0

    logs = [entry(1, "grounded"), entry(9, "abstained")]
    series = abstention_series(logs, 5)
    assert len(series) == 2
    assert series[0]["abstention_pct"] == 0.0
    assert series[1]["abstention_pct"] == 100.0


def test_metrics_empty_log_empty_series(service):
    client, _, _ = service
    payload = client.get("/v1/metrics/abstention", params={"window": "5d"}).json()
    assert payload["buckets"] == []


def test_log_mirror_matches_schema(service, tmp_path):
    client, store, _ = service
    session_id = _session(client)
    client.post("/v1/query", json={"text": GROUNDED_QUERY, "session_id": session_id})
    mirror = (store._log_mirror).read_text(encoding="utf-8").strip().splitlines()
    assert len(mirror) == 1
    record = json.loads(mirror[0])
    assert set(record) == {"ts", "session_id", "user_hash", "query", "language",
                           "kind", "citations", "latency_ms"}


def test_provider_outage_returns_503_with_retry_after(tmp_path, indexes20, providers):
    from groundline.providers.base import ProviderTimeout

    class OutageDecomposer:
        profile = providers.decompose.profile

        def decompose(self, query, session_context=()):
            raise ProviderTimeout("simulated outage")

    import dataclasses
    broken = dataclasses.replace(providers, decompose=OutageDecomposer())
    engine = QueryEngine(indexes20, broken, fixture_config())
    store = ServiceStore(tmp_path / "store.db")
    client = TestClient(create_app(engine, store))
    session_id = client.post("/v1/sessions", json={"user": "u"}).json()["session_id"]
    response = client.post("/v1/query", json={"text": "anything", "session_id": session_id})
    assert response.status_code == 503
    assert response.headers.get("retry-after") == "1"


def test_preferred_docs_bias_never_relaxes_gate(tmp_path, indexes20, providers):
    """Preference boosts ranking but distractors still abstain."""
    engine = QueryEngine(indexes20, providers, fixture_config())
    store = ServiceStore(tmp_path / "store.db")
    client = TestClient(create_app(engine, store))
    response = client.post("/v1/sessions", json={
        "user": "u", "preferred_docs": ["wb-000"]})
    session_id = response.json()["session_id"]
    envelope = client.post("/v1/query", json={
        "text": "Choreograph a tango for penguins.", "session_id": session_id}).json()
    assert envelope["kind"] == "abstained"
