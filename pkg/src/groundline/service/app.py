"""HTTP query service: pipeline endpoint, citation resolution, notes, metrics."""

from __future__ import annotations

import datetime as dt
import json
import time

from fastapi import FastAPI, Response
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field

from groundline.engine import QueryEngine
from groundline.index.search import Indexes
from groundline.providers.base import ProviderError
from groundline.service.context import context_window, detect_language
from groundline.service.storage import QueryLogEntry, ServiceStore


def canonical_json(payload) -> str:
    return json.dumps(payload, ensure_ascii=False, sort_keys=True, separators=(",", ":"))


def _json_response(payload, status_code: int = 200) -> Response:
    return Response(content=canonical_json(payload), status_code=status_code,
                    media_type="application/json")


def _error(status_code: int, message: str, **extra) -> Response:
    body = {"error": message}
    body.update(extra)
    return _json_response(body, status_code=status_code)


class SessionRequest(BaseModel):
    user: str
    render_language: str | None = None
    preferred_docs: list[str] = Field(default_factory=list)
    interests: list[str] = Field(default_factory=list)


class QueryRequest(BaseModel):
    text: str
    session_id: str
    render_language: str | None = None
    context: list[str] = Field(default_factory=list)


class NoteRequest(BaseModel):
    session_id: str
    envelope_ref: str  # trace id of a stored envelope
    tags: list[str] = Field(default_factory=list)


class TagRequest(BaseModel):
    session_id: str
    tags: list[str]


class CorpusRegistry:
    """Version-pinned corpora the service can resolve citations against."""

    def __init__(self):
        self._by_version: dict[str, Indexes] = {}

    def add(self, indexes: Indexes) -> None:
        self._by_version[indexes.corpus.version.version_id] = indexes

    def get(self, version_id: str) -> Indexes | None:
        return self._by_version.get(version_id)


def create_app(engine: QueryEngine, store: ServiceStore,
               registry: CorpusRegistry | None = None,
               clock=None) -> FastAPI:
    registry = registry or CorpusRegistry()
    registry.add(engine.indexes)
    now = clock or (lambda: dt.datetime.now(dt.timezone.utc))

    app = FastAPI(title="groundline", version="0.1.0")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"])
    app.state.rebuilding = False
    app.state.engine = engine
    app.state.store = store
    app.state.registry = registry

    @app.post("/v1/sessions")
    def create_session(body: SessionRequest):
        preferences = {
            "render_language": body.render_language,
            "preferred_docs": list(body.preferred_docs),
            "interests": list(body.interests),
        }
        session_id = store.create_session(body.user, now().isoformat(), preferences)
        return _json_response({"session_id": session_id}, status_code=201)

    @app.post("/v1/query")
    def query(body: QueryRequest):
        if not body.text.strip():
            return _error(400, "query text must be non-empty")
        session = store.get_session(body.session_id)
        if session is None:
            return _error(404, "unknown session")
        if app.state.rebuilding:
            return _error(409, "corpus is rebuilding; retry later")

        preferences = session["preferences"]
        render_language = body.render_language or preferences.get("render_language")
        preferred = frozenset(preferences.get("preferred_docs") or ())
        started = time.monotonic()
        try:
            envelope, trace = engine.answer(
                body.text, session_context=tuple(body.context),
                render_language=render_language, preferred_docs=preferred)
        except ProviderError as exc:
            if exc.retryable:
                return Response(
                    content=canonical_json({"error": f"provider outage: {exc}"}),
                    status_code=503, media_type="application/json",
                    headers={"Retry-After": "1"})
            return _error(502, f"provider failure: {exc}")
        latency_ms = int((time.monotonic() - started) * 1000)

        payload = envelope.to_json()
        envelope_json = canonical_json(payload)
        store.put_envelope(body.session_id, envelope.trace_id,
                           envelope.corpus_version, envelope_json,
                           canonical_json(trace.to_json()))
        if envelope.answer is not None:
            store.put_anchors(envelope.trace_id, envelope.corpus_version,
                              [c.to_json() for c in envelope.answer.citations])
        store.append_log(QueryLogEntry(
            ts=now().isoformat(), session_id=body.session_id,
            user_hash=session["user_hash"], query=body.text,
            language=detect_language(body.text), kind=envelope.kind,
            citations=envelope.citation_count(), latency_ms=latency_ms))
        return Response(content=envelope_json, media_type="application/json")

    @app.get("/v1/traces/{trace_id}")
    def get_trace(trace_id: str):
        row = store.get_envelope(trace_id)
        if row is None:
            return _error(404, "unknown trace")
        return Response(content=row["trace"], media_type="application/json")

    @app.get("/v1/documents/{doc_id}")
    def get_document(doc_id: str, version: str | None = None):
        """Block-structured canonical content for the source viewer."""
        indexes = registry.get(version) if version else engine.indexes
        if indexes is None:
            return _error(409, "corpus version no longer available", corpus_version=version)
        corpus = indexes.corpus
        doc = corpus.documents.get(doc_id)
        if doc is None:
            return _error(404, "unknown document")
        from groundline.corpus.canonical import canonicalize

        _, spans = canonicalize(doc)
        return _json_response({
            "doc_id": doc.doc_id,
            "title": doc.title,
            "language": doc.language,
            "source_uri": doc.source_uri,
            "page_count": doc.page_count,
            "corpus_version": corpus.version.version_id,
            "blocks": [
                {"path": b.path, "kind": b.kind, "page": b.page, "text": b.text,
                 "byte_range": [s.byte_start, s.byte_end]}
                for b, s in zip(doc.blocks, spans)
            ],
        })

    @app.get("/v1/citations/{anchor_id}")
    def get_citation(anchor_id: str):
        anchor = store.get_anchor(anchor_id)
        if anchor is None:
            return _error(404, "unknown anchor")
        indexes = registry.get(anchor["corpus_version"])
        if indexes is None:
            return _error(409, "corpus version no longer available",
                          corpus_version=anchor["corpus_version"])
        corpus = indexes.corpus
        doc = corpus.documents.get(anchor["doc_id"])
        if doc is None:
            return _error(409, "document missing from pinned corpus version")
        start, end = anchor["byte_range"]
        quote = corpus.slice_bytes(anchor["doc_id"], start, end)
        context, context_range = context_window(corpus, anchor["doc_id"], start, end)
        return _json_response({
            "anchor_id": anchor["anchor_id"],
            "doc_id": anchor["doc_id"],
            "title": doc.title,
            "page": anchor["page"],
            "quote": quote,
            "context_window": context,
            "context_byte_range": list(context_range),
            "byte_range": [start, end],
            "source_uri": doc.source_uri,
        })

    @app.post("/v1/notes")
    def save_note(body: NoteRequest):
        row = store.get_envelope(body.envelope_ref)
        if row is None:
            return _error(404, "unknown envelope")
        if row["session_id"] != body.session_id:
            return _error(403, "envelope belongs to another session")
        note_id = store.save_note(
            body.session_id, body.envelope_ref, row["envelope"],
            row["corpus_version"], list(body.tags), now().isoformat())
        return _json_response({"note_id": note_id}, status_code=201)

    @app.get("/v1/notes")
    def list_notes(session_id: str):
        notes = store.notes_for_session(session_id)
        return _json_response({"notes": notes})

    @app.post("/v1/notes/{note_id}/tags")
    def tag_note(note_id: str, body: TagRequest):
        note = store.get_note(note_id)
        if note is None:
            return _error(404, "unknown note")
        if note["session_id"] != body.session_id:
            return _error(403, "note belongs to another session")
        updated = store.add_tags(note_id, body.tags)
        return _json_response({"note": updated})

    @app.get("/v1/export/{session_id}")
    def export_session(session_id: str):
        if store.get_session(session_id) is None:
            return _error(404, "unknown session")
        bundle = []
        for note in store.notes_for_session(session_id):
            indexes = registry.get(note["corpus_version"])
            if indexes is None:
                return _error(409, "pinned corpus version unavailable",
                              corpus_version=note["corpus_version"])
            resolved = _resolve_citations(note["envelope"], indexes)
            if resolved is None:
                return _error(409, "anchor failed to resolve against pinned version")
            bundle.append({
                "note_id": note["note_id"],
                "tags": note["tags"],
                "corpus_version": note["corpus_version"],
                "markdown": _note_markdown(note),
                "sidecar": {
                    "note_id": note["note_id"],
                    "trace_id": note["trace_id"],
                    "corpus_version": note["corpus_version"],
                    "saved_at": note["saved_at"],
                    "envelope": note["envelope"],
                    "anchors": resolved,
                },
            })
        return _json_response({"session_id": session_id, "notes": bundle})

    @app.get("/v1/metrics/abstention")
    def abstention_metrics(window: str = "5d"):
        if not window.endswith("d"):
            return _error(400, "window must look like '5d'")
        try:
            days = int(window[:-1])
        except ValueError:
            return _error(400, "window must look like '5d'")
        if days < 1:
            return _error(400, "window must cover at least one day")
        return _json_response({"window_days": days,
                               "buckets": abstention_series(store.all_logs(), days)})

    return app


def _resolve_citations(envelope: dict, indexes) -> list[dict] | None:
    """Re-check every anchor against the pinned corpus; None on any mismatch."""
    corpus = indexes.corpus
    resolved = []
    for anchor in envelope.get("citations", []):
        start, end = anchor["byte_range"]
        try:
            sliced = corpus.slice_bytes(anchor["doc_id"], start, end)
        except KeyError:
            return None
        if sliced != anchor["quote"]:
            return None
        resolved.append(dict(anchor, resolved=True))
    return resolved


def _note_markdown(note: dict) -> str:
    envelope = note["envelope"]
    lines = [f"# Note {note['note_id']}", ""]
    lines.append(f"**Query:** {envelope['query']}")
    lines.append(f"**Corpus version:** {note['corpus_version']}")
    if note["tags"]:
        lines.append(f"**Tags:** {', '.join(note['tags'])}")
    lines.append("")
    if envelope["kind"] == "grounded":
        lines.append(envelope["text"])
        lines.append("")
        lines.append("## Citations")
        for i, anchor in enumerate(envelope.get("citations", []), start=1):
            lines.append(
                f"[{i}] {anchor['doc_id']}, p. {anchor['page']} — \"{anchor['quote']}\"")
    else:
        lines.append(f"**Abstained:** {envelope['rationale']}")
        lines.append("")
        lines.append("## Suggested refinements")
        for refinement in envelope.get("refinements", []):
            lines.append(f"- {refinement}")
    return "\n".join(lines) + "\n"


def abstention_series(logs: list[QueryLogEntry], window_days: int) -> list[dict]:
    """Bucket logs into ``window_days`` calendar-day spans from the first entry."""
    if not logs:
        return []
    dates = [dt.datetime.fromisoformat(entry.ts).date() for entry in logs]
    first = min(dates)
    buckets: dict[int, list[QueryLogEntry]] = {}
    for entry, date in zip(logs, dates):
        buckets.setdefault((date - first).days // window_days, []).append(entry)
    series = []
    for index in sorted(buckets):
        rows = buckets[index]
        total = len(rows)
        abstained = sum(1 for r in rows if r.kind == "abstained")
        start = first + dt.timedelta(days=index * window_days)
        series.append({
            "start": start.isoformat(),
            "end": (start + dt.timedelta(days=window_days - 1)).isoformat(),
            "total": total,
            "abstained": abstained,
            "abstention_pct": round(100.0 * abstained / total, 2),
        })
    return series
