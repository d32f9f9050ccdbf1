"""Corpus directory persistence.

Layout::

    <corpus-dir>/
      manifest.json     version id, counts, creation time
      documents.jsonl   one normalized source document per line
      ingest_report.json  (written by the CLI when ingesting)

Nodes and canonical texts are rebuilt deterministically on load; the
manifest version id guards against drift.
"""

from __future__ import annotations

import json
from pathlib import Path

from groundline.corpus.ingest import IngestReport, build_corpus
from groundline.corpus.model import Block, Corpus, SourceDocument


def document_to_record(doc: SourceDocument) -> dict:
    return {
        "doc_id": doc.doc_id,
        "title": doc.title,
        "language": doc.language,
        "source_uri": doc.source_uri,
        "page_count": doc.page_count,
        "blocks": [
            {"path": b.path, "kind": b.kind, "page": b.page, "text": b.text}
            for b in doc.blocks
        ],
    }


def save_corpus(corpus: Corpus, out_dir: Path, report: IngestReport | None = None) -> None:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    with (out_dir / "documents.jsonl").open("w", encoding="utf-8") as fh:
        for doc_id in corpus.documents:
            fh.write(json.dumps(document_to_record(corpus.documents[doc_id]),
                                ensure_ascii=False, sort_keys=True))
            fh.write("\n")
    manifest = {
        "format": "groundline-corpus/1",
        "version_id": corpus.version.version_id,
        "created_at": corpus.version.created_at,
        "doc_count": corpus.version.doc_count,
        "node_count": corpus.version.node_count,
    }
    (out_dir / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    if report is not None:
        payload = {
            "errors": [
                {"line": e.line, "doc_id": e.doc_id, "message": e.message}
                for e in report.errors
            ],
            "flags": [
                {"doc_id": f.doc_id, "path": f.path, "page": f.page, "reason": f.reason}
                for f in report.flags
            ],
            "doc_count": report.doc_count,
            "node_count": report.node_count,
        }
        (out_dir / "ingest_report.json").write_text(
            json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def load_corpus(corpus_dir: Path) -> Corpus:
    corpus_dir = Path(corpus_dir)
    manifest = json.loads((corpus_dir / "manifest.json").read_text(encoding="utf-8"))
    documents = []
    with (corpus_dir / "documents.jsonl").open("r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            record = json.loads(line)
            documents.append(SourceDocument(
                doc_id=record["doc_id"],
                title=record["title"],
                language=record["language"],
                source_uri=record["source_uri"],
                page_count=record["page_count"],
                blocks=tuple(
                    Block(path=b["path"], kind=b["kind"], page=b["page"], text=b["text"])
                    for b in record["blocks"]
                ),
            ))
    corpus = build_corpus(documents, created_at=manifest["created_at"])
    if corpus.version.version_id != manifest["version_id"]:
        raise ValueError(
            f"corpus at {corpus_dir} rebuilt to version {corpus.version.version_id}, "
            f"manifest pins {manifest['version_id']}"
        )
    return corpus
