"""JSONL document ingestion with per-line validation and error reporting."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import IO, Iterable

from groundline.corpus.chunking import ChunkFlag, chunk
from groundline.corpus.canonical import canonicalize
from groundline.corpus.model import (
    BLOCK_KINDS,
    Block,
    Corpus,
    CorpusVersion,
    SourceDocument,
    compute_version_id,
)
from groundline.text import normalize_space

_PATH_RE = re.compile(r"^[1-9][0-9]*(\.[1-9][0-9]*)*$")
_LANGUAGE_RE = re.compile(r"^[A-Za-z]{2,8}(-[A-Za-z0-9]{1,8})*$")


@dataclass
class IngestError:
    line: int
    doc_id: str | None
    message: str


@dataclass
class IngestReport:
    errors: list[IngestError] = field(default_factory=list)
    flags: list[ChunkFlag] = field(default_factory=list)
    doc_count: int = 0
    node_count: int = 0

    @property
    def rejected(self) -> bool:
        return bool(self.errors)


def ingest(stream: IO[str] | Iterable[str]) -> tuple[list[SourceDocument], IngestReport]:
    """Parse one document per JSONL line, keeping valid lines on error."""
    report = IngestReport()
    documents: list[SourceDocument] = []
    seen_ids: dict[str, int] = {}
    for line_no, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line:
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            report.errors.append(IngestError(line_no, None, f"invalid JSON: {exc}"))
            continue
        try:
            doc = _parse_document(record)
        except ValueError as exc:
            doc_id = record.get("doc_id") if isinstance(record, dict) else None
            report.errors.append(IngestError(line_no, doc_id, str(exc)))
            continue
        if doc.doc_id in seen_ids:
            report.errors.append(IngestError(
                line_no, doc.doc_id,
                f"duplicate doc_id {doc.doc_id!r} (first seen on line {seen_ids[doc.doc_id]})",
            ))
            continue
        seen_ids[doc.doc_id] = line_no
        documents.append(doc)
    report.doc_count = len(documents)
    return documents, report


def _parse_document(record: object) -> SourceDocument:
    if not isinstance(record, dict):
        raise ValueError("document record must be a JSON object")
    doc_id = record.get("doc_id")
    if not isinstance(doc_id, str) or not doc_id:
        raise ValueError("doc_id must be a non-empty string")
    title = record.get("title")
    if not isinstance(title, str):
        raise ValueError("title must be a string")
    language = record.get("language")
    if not isinstance(language, str) or not _LANGUAGE_RE.match(language):
        raise ValueError(f"language must be a BCP-47 tag, got {language!r}")
    source_uri = record.get("source_uri")
    if not isinstance(source_uri, str):
        raise ValueError("source_uri must be a string")
    page_count = record.get("page_count")
    if not isinstance(page_count, int) or isinstance(page_count, bool) or page_count < 1:
        raise ValueError("page_count must be a positive integer")
    raw_blocks = record.get("blocks")
    if not isinstance(raw_blocks, list) or not raw_blocks:
        raise ValueError("blocks must be a non-empty list")

    blocks: list[Block] = []
    paths: set[str] = set()
    for i, raw in enumerate(raw_blocks):
        if not isinstance(raw, dict):
            raise ValueError(f"block {i} must be an object")
        path = raw.get("path")
        if not isinstance(path, str) or not _PATH_RE.match(path):
            raise ValueError(f"block {i} path {path!r} is not a dotted positive-integer path")
        kind = raw.get("kind")
        if kind not in BLOCK_KINDS:
            raise ValueError(f"block {i} kind {kind!r} not one of {BLOCK_KINDS}")
        page = raw.get("page")
        if not isinstance(page, int) or isinstance(page, bool) or not 1 <= page <= page_count:
            raise ValueError(f"block {i} page {page!r} outside [1, {page_count}]")
        text = raw.get("text")
        if not isinstance(text, str) or not normalize_space(text):
            raise ValueError(f"block {i} text empty after whitespace normalization")
        blocks.append(Block(path=path, kind=kind, page=page, text=text))
        paths.add(path)

    for block in blocks:
        head, _, _ = block.path.rpartition(".")
        if head and head not in paths:
            raise ValueError(f"orphan block path {block.path!r}: parent {head!r} missing")
    return SourceDocument(
        doc_id=doc_id, title=title, language=language, source_uri=source_uri,
        page_count=page_count, blocks=tuple(blocks),
    )


def build_corpus(documents: list[SourceDocument],
                 report: IngestReport | None = None,
                 created_at: str | None = None) -> Corpus:
    """Chunk every document and assemble the immutable corpus."""
    canonical: dict[str, str] = {}
    nodes = []
    for doc in documents:
        text, _ = canonicalize(doc)
        canonical[doc.doc_id] = text
        result = chunk(doc)
        nodes.extend(result.nodes)
        if report is not None:
            report.flags.extend(result.flags)
    if report is not None:
        report.node_count = len(nodes)
    if created_at is None:
        created_at = datetime.now(timezone.utc).isoformat()
    version = CorpusVersion(
        version_id=compute_version_id(nodes),
        created_at=created_at,
        doc_count=len(documents),
        node_count=len(nodes),
    )
    return Corpus(
        documents={d.doc_id: d for d in documents},
        canonical=canonical,
        nodes=nodes,
        version=version,
    )
