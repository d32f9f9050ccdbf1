"""Index construction and on-disk persistence.

Persisted layout (all JSON files use sorted keys, so rebuilding the same
corpus writes byte-identical files)::

    <index-dir>/
      header.json     format tag, corpus version id, BM25 params, embed dim
      node_ids.json   node ids in corpus order
      graph.json      parent map + cross_ref pairs (other edges derivable)
      lexical.json    postings and node lengths
      vectors.npy     (n, dim) float64 embedding matrix in corpus order
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from groundline.corpus.model import Corpus
from groundline.index.graph import build_graph
from groundline.index.lexical import DEFAULT_B, DEFAULT_K1, LexicalIndex, build_lexical
from groundline.index.search import Indexes
from groundline.index.vectors import VectorIndex, build_vectors

FORMAT_TAG = "groundline-index/1"


def load_cross_refs(path: Path) -> list[tuple[str, str]]:
    """Read a ``refs.jsonl`` sidecar of ``{"a": node_id, "b": node_id}`` rows."""
    pairs = []
    with Path(path).open("r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            record = json.loads(line)
            pairs.append((record["a"], record["b"]))
    return pairs


def build(corpus: Corpus, embed_provider,
          cross_ref_pairs: list[tuple[str, str]] | None = None,
          k1: float = DEFAULT_K1, b: float = DEFAULT_B) -> Indexes:
    """Build graph, lexical, and vector backends over an immutable corpus."""
    graph = build_graph(corpus, cross_ref_pairs)
    lexical = build_lexical(corpus, k1=k1, b=b)
    vectors = build_vectors(corpus, embed_provider)
    return Indexes(corpus=corpus, graph=graph, lexical=lexical,
                   vectors=vectors, embed_provider=embed_provider)


def save_indexes(indexes: Indexes, out_dir: Path) -> None:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    header = {
        "format": FORMAT_TAG,
        "corpus_version": indexes.corpus.version.version_id,
        "embed_dim": indexes.vectors.dim,
        "bm25": {"k1": indexes.lexical.k1, "b": indexes.lexical.b},
        "node_count": indexes.vectors.size,
    }
    _write_json(out_dir / "header.json", header)
    _write_json(out_dir / "node_ids.json", indexes.vectors.node_ids)
    cross_pairs = sorted(
        {tuple(sorted((a, b))) for a, refs in indexes.graph.cross_refs.items() for b in refs}
    )
    _write_json(out_dir / "graph.json", {
        "parent": indexes.graph.parent,
        "cross_refs": [list(pair) for pair in cross_pairs],
    })
    _write_json(out_dir / "lexical.json", {
        "postings": {t: [[n, tf] for n, tf in rows] for t, rows in indexes.lexical.postings.items()},
        "node_len": indexes.lexical.node_len,
    })
    with (out_dir / "vectors.npy").open("wb") as fh:
        np.save(fh, indexes.vectors.matrix)


def load_indexes(index_dir: Path, corpus: Corpus, embed_provider) -> Indexes:
    index_dir = Path(index_dir)
    header = json.loads((index_dir / "header.json").read_text(encoding="utf-8"))
    if header.get("format") != FORMAT_TAG:
        raise ValueError(f"unsupported index format {header.get('format')!r}")
    if header["corpus_version"] != corpus.version.version_id:
        raise ValueError(
            f"index built for corpus {header['corpus_version']}, "
            f"loaded corpus is {corpus.version.version_id}")
    graph_data = json.loads((index_dir / "graph.json").read_text(encoding="utf-8"))
    graph = build_graph(corpus, [tuple(p) for p in graph_data["cross_refs"]])
    lexical_data = json.loads((index_dir / "lexical.json").read_text(encoding="utf-8"))
    lexical = LexicalIndex(
        postings={t: [(n, tf) for n, tf in rows] for t, rows in lexical_data["postings"].items()},
        node_len=lexical_data["node_len"],
        k1=header["bm25"]["k1"], b=header["bm25"]["b"],
    )
    with (index_dir / "vectors.npy").open("rb") as fh:
        matrix = np.load(fh)
    node_ids = json.loads((index_dir / "node_ids.json").read_text(encoding="utf-8"))
    vectors = VectorIndex(node_ids=node_ids, matrix=matrix)
    return Indexes(corpus=corpus, graph=graph, lexical=lexical,
                   vectors=vectors, embed_provider=embed_provider)


def _write_json(path: Path, payload) -> None:
    path.write_text(
        json.dumps(payload, ensure_ascii=False, sort_keys=True, separators=(",", ":")) + "\n",
        encoding="utf-8")
