"""Embedded service store: sessions, envelopes, notes, and query logs.

One SQLite file per deployment plus an append-only JSONL mirror of the
query log for analytics ingestion. User identifiers are stored only as
hashes; raw identities never reach disk.
"""

from __future__ import annotations

import hashlib
import json
import sqlite3
import threading
import uuid
from dataclasses import dataclass
from pathlib import Path

_SCHEMA = """
CREATE TABLE IF NOT EXISTS sessions (
    session_id TEXT PRIMARY KEY,
    user_hash TEXT NOT NULL,
    created_at TEXT NOT NULL,
    preferences TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS envelopes (
    trace_id TEXT PRIMARY KEY,
    session_id TEXT NOT NULL,
    corpus_version TEXT NOT NULL,
    envelope TEXT NOT NULL,
    trace TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS anchors (
    anchor_id TEXT PRIMARY KEY,
    trace_id TEXT NOT NULL,
    corpus_version TEXT NOT NULL,
    node_id TEXT NOT NULL,
    doc_id TEXT NOT NULL,
    page INTEGER NOT NULL,
    byte_start INTEGER NOT NULL,
    byte_end INTEGER NOT NULL,
    quote TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS notes (
    note_id TEXT PRIMARY KEY,
    session_id TEXT NOT NULL,
    trace_id TEXT NOT NULL,
    envelope TEXT NOT NULL,
    tags TEXT NOT NULL,
    corpus_version TEXT NOT NULL,
    saved_at TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS logs (
    id INTEGER PRIMARY KEY AUTOINCREMENT,
    ts TEXT NOT NULL,
    session_id TEXT NOT NULL,
    user_hash TEXT NOT NULL,
    query TEXT NOT NULL,
    language TEXT NOT NULL,
    kind TEXT NOT NULL,
    citations INTEGER NOT NULL,
    latency_ms INTEGER NOT NULL
);
"""


def hash_user(identifier: str) -> str:
    return hashlib.blake2b(identifier.encode("utf-8"), digest_size=16).hexdigest()


@dataclass(frozen=True)
class QueryLogEntry:
    ts: str
    session_id: str
    user_hash: str
    query: str
    language: str
    kind: str  # grounded | abstained
    citations: int
    latency_ms: int

    def to_json(self) -> dict:
        return {
            "ts": self.ts, "session_id": self.session_id, "user_hash": self.user_hash,
            "query": self.query, "language": self.language, "kind": self.kind,
            "citations": self.citations, "latency_ms": self.latency_ms,
        }


class ServiceStore:
    def __init__(self, db_path: Path | str, log_mirror: Path | str | None = None):
        self._conn = sqlite3.connect(str(db_path), check_same_thread=False)
        self._conn.executescript(_SCHEMA)
        self._conn.commit()
        self._lock = threading.Lock()
        self._log_mirror = Path(log_mirror) if log_mirror else None

    # sessions -------------------------------------------------------------

    def create_session(self, user: str, created_at: str, preferences: dict | None = None) -> str:
        session_id = uuid.uuid4().hex
        with self._lock:
            self._conn.execute(
                "INSERT INTO sessions VALUES (?, ?, ?, ?)",
                (session_id, hash_user(user), created_at,
                 json.dumps(preferences or {}, sort_keys=True)))
            self._conn.commit()
        return session_id

    def get_session(self, session_id: str) -> dict | None:
        row = self._conn.execute(
            "SELECT session_id, user_hash, created_at, preferences FROM sessions "
            "WHERE session_id = ?", (session_id,)).fetchone()
        if row is None:
            return None
        return {"session_id": row[0], "user_hash": row[1], "created_at": row[2],
                "preferences": json.loads(row[3])}

    def update_preferences(self, session_id: str, preferences: dict) -> None:
        with self._lock:
            self._conn.execute(
                "UPDATE sessions SET preferences = ? WHERE session_id = ?",
                (json.dumps(preferences, sort_keys=True), session_id))
            self._conn.commit()

    # envelopes and traces ---------------------------------------------------

    def put_envelope(self, session_id: str, trace_id: str, corpus_version: str,
                     envelope_json: str, trace_json: str) -> None:
        with self._lock:
            self._conn.execute(
                "INSERT OR REPLACE INTO envelopes VALUES (?, ?, ?, ?, ?)",
                (trace_id, session_id, corpus_version, envelope_json, trace_json))
            self._conn.commit()

    def get_envelope(self, trace_id: str) -> dict | None:
        row = self._conn.execute(
            "SELECT session_id, corpus_version, envelope, trace FROM envelopes "
            "WHERE trace_id = ?", (trace_id,)).fetchone()
        if row is None:
            return None
        return {"session_id": row[0], "corpus_version": row[1],
                "envelope": row[2], "trace": row[3]}

    def put_anchors(self, trace_id: str, corpus_version: str, anchors: list[dict]) -> None:
        with self._lock:
            for anchor in anchors:
                self._conn.execute(
                    "INSERT OR REPLACE INTO anchors VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?)",
                    (anchor["anchor_id"], trace_id, corpus_version, anchor["node_id"],
                     anchor["doc_id"], anchor["page"], anchor["byte_range"][0],
                     anchor["byte_range"][1], anchor["quote"]))
            self._conn.commit()

    def get_anchor(self, anchor_id: str) -> dict | None:
        row = self._conn.execute(
            "SELECT anchor_id, trace_id, corpus_version, node_id, doc_id, page, "
            "byte_start, byte_end, quote FROM anchors WHERE anchor_id = ?",
            (anchor_id,)).fetchone()
        if row is None:
            return None
        return {"anchor_id": row[0], "trace_id": row[1], "corpus_version": row[2],
                "node_id": row[3], "doc_id": row[4], "page": row[5],
                "byte_range": (row[6], row[7]), "quote": row[8]}

    # notes ------------------------------------------------------------------

    def save_note(self, session_id: str, trace_id: str, envelope_json: str,
                  corpus_version: str, tags: list[str], saved_at: str) -> str:
        note_id = uuid.uuid4().hex
        with self._lock:
            self._conn.execute(
                "INSERT INTO notes VALUES (?, ?, ?, ?, ?, ?, ?)",
                (note_id, session_id, trace_id, envelope_json,
                 json.dumps(tags), corpus_version, saved_at))
            self._conn.commit()
        return note_id

    def get_note(self, note_id: str) -> dict | None:
        row = self._conn.execute(
            "SELECT note_id, session_id, trace_id, envelope, tags, corpus_version, saved_at "
            "FROM notes WHERE note_id = ?", (note_id,)).fetchone()
        return self._note_row(row)

    def notes_for_session(self, session_id: str) -> list[dict]:
        rows = self._conn.execute(
            "SELECT note_id, session_id, trace_id, envelope, tags, corpus_version, saved_at "
            "FROM notes WHERE session_id = ? ORDER BY saved_at, note_id",
            (session_id,)).fetchall()
        return [self._note_row(r) for r in rows]

    def add_tags(self, note_id: str, tags: list[str]) -> dict | None:
        note = self.get_note(note_id)
        if note is None:
            return None
        merged = list(dict.fromkeys(note["tags"] + list(tags)))
        with self._lock:
            self._conn.execute("UPDATE notes SET tags = ? WHERE note_id = ?",
                               (json.dumps(merged), note_id))
            self._conn.commit()
        note["tags"] = merged
        return note

    @staticmethod
    def _note_row(row) -> dict | None:
        if row is None:
            return None
        return {"note_id": row[0], "session_id": row[1], "trace_id": row[2],
                "envelope": json.loads(row[3]), "tags": json.loads(row[4]),
                "corpus_version": row[5], "saved_at": row[6]}

    # logs ----------------------------------------------------------------------

    def append_log(self, entry: QueryLogEntry) -> None:
        with self._lock:
            self._conn.execute(
                "INSERT INTO logs (ts, session_id, user_hash, query, language, kind, "
                "citations, latency_ms) VALUES (?, ?, ?, ?, ?, ?, ?, ?)",
                (entry.ts, entry.session_id, entry.user_hash, entry.query,
                 entry.language, entry.kind, entry.citations, entry.latency_ms))
            self._conn.commit()
            if self._log_mirror is not None:
                with self._log_mirror.open("a", encoding="utf-8") as fh:
                    fh.write(json.dumps(entry.to_json(), ensure_ascii=False, sort_keys=True))
                    fh.write("\n")

    def all_logs(self) -> list[QueryLogEntry]:
        rows = self._conn.execute(
            "SELECT ts, session_id, user_hash, query, language, kind, citations, latency_ms "
            "FROM logs ORDER BY id").fetchall()
        return [QueryLogEntry(*row) for row in rows]
