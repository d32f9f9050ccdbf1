"""Flat vector index: unit-norm embeddings with exhaustive cosine scan."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from groundline.corpus.model import Corpus

NORM_TOLERANCE = 1e-6


@dataclass
class VectorIndex:
    node_ids: list[str]
    matrix: np.ndarray  # (n, dim), unit L2 rows

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[1]) if self.matrix.size else 0

    @property
    def size(self) -> int:
        return len(self.node_ids)

    def cosine_scores(self, query_vec: np.ndarray) -> dict[str, float]:
        if not self.node_ids:
            return {}
        sims = self.matrix @ np.asarray(query_vec, dtype=np.float64)
        return {node_id: float(s) for node_id, s in zip(self.node_ids, sims)}


def build_vectors(corpus: Corpus, embed_provider) -> VectorIndex:
    """Embed every node; aborts (raises) on provider failure."""
    texts = [n.text for n in corpus.nodes]
    if not texts:
        return VectorIndex(node_ids=[], matrix=np.zeros((0, 0), dtype=np.float64))
    vectors = embed_provider.embed(texts)
    matrix = np.asarray(vectors, dtype=np.float64)
    norms = np.linalg.norm(matrix, axis=1)
    if np.any(norms == 0.0):
        raise ValueError("embedding provider returned a zero vector")
    off = np.abs(norms - 1.0) > NORM_TOLERANCE
    if np.any(off):
        matrix[off] = matrix[off] / norms[off, None]
    return VectorIndex(node_ids=[n.node_id for n in corpus.nodes], matrix=matrix)


def embed_query(embed_provider, text: str) -> np.ndarray:
    vec = np.asarray(embed_provider.embed([text])[0], dtype=np.float64)
    norm = np.linalg.norm(vec)
    if norm > 0 and abs(norm - 1.0) > NORM_TOLERANCE:
        vec = vec / norm
    return vec
