"""Search primitives over the dual-backend index.

Lexical search ranks by BM25, semantic search by exhaustive cosine over the
flat vector index, hybrid by the mean of the two normalized scores. All
orderings are (score desc, node_id asc) so results are fully deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from groundline.corpus.model import ChunkNode, Corpus
from groundline.index.graph import DocumentGraph
from groundline.index.lexical import LexicalIndex
from groundline.index.vectors import VectorIndex, embed_query
from groundline.text import normalize_space, word_tokens


@dataclass(frozen=True)
class ScoredHit:
    node_id: str
    score: float
    source: str  # lexical | semantic | structural | hybrid


# Ranking scores are quantized so that mathematically equal scores computed
# through different summation orders (BLAS matvec vs a scalar loop) collapse
# to the same value and fall through to the node-id tie-break identically.
SCORE_DECIMALS = 12


def quantize(score: float) -> float:
    return round(score, SCORE_DECIMALS)


@dataclass(frozen=True)
class SearchFilters:
    doc_ids: frozenset[str] | None = None
    page_range: tuple[int, int] | None = None
    phrases: tuple[str, ...] = ()

    def admits(self, node: ChunkNode) -> bool:
        if self.doc_ids is not None and node.doc_id not in self.doc_ids:
            return False
        if self.page_range is not None:
            lo, hi = self.page_range
            if not lo <= node.page <= hi:
                return False
        if self.phrases:
            haystack = normalize_space(node.text.lower())
            for phrase in self.phrases:
                if normalize_space(phrase.lower()) not in haystack:
                    return False
        return True


def lexical_normalized(score: float) -> float:
    """Monotone map of a BM25 score into [0, 1)."""
    return score / (1.0 + score)


def cosine_normalized(score: float) -> float:
    """Affine map of cosine similarity from [-1, 1] into [0, 1]."""
    return (score + 1.0) / 2.0


@dataclass
class Indexes:
    """The built dual-backend index plus the corpus it was built from."""

    corpus: Corpus
    graph: DocumentGraph
    lexical: LexicalIndex
    vectors: VectorIndex
    embed_provider: object
    _query_cache: dict[str, object] = field(default_factory=dict, repr=False)

    def _rank(self, scores: dict[str, float], k: int, source: str,
              filters: SearchFilters | None) -> list[ScoredHit]:
        filters = filters or SearchFilters()
        admitted = []
        for node_id, score in scores.items():
            if filters.admits(self.corpus.node(node_id)):
                admitted.append((node_id, quantize(score)))
        admitted.sort(key=lambda pair: (-pair[1], pair[0]))
        return [ScoredHit(node_id=n, score=s, source=source) for n, s in admitted[:k]]

    def lexical_search(self, query_text: str, k: int,
                       filters: SearchFilters | None = None) -> list[ScoredHit]:
        tokens = word_tokens(query_text)
        if not tokens:
            return []
        return self._rank(self.lexical.score(tokens), k, "lexical", filters)

    def semantic_search(self, query_text: str, k: int,
                        filters: SearchFilters | None = None) -> list[ScoredHit]:
        scores = self.vectors.cosine_scores(self._query_vector(query_text))
        return self._rank(scores, k, "semantic", filters)

    def hybrid_search(self, query_text: str, k: int,
                      filters: SearchFilters | None = None) -> list[ScoredHit]:
        tokens = word_tokens(query_text)
        lex = self.lexical.score(tokens) if tokens else {}
        sem = self.vectors.cosine_scores(self._query_vector(query_text))
        combined = {}
        for node_id in set(lex) | set(sem):
            score = (
                lexical_normalized(lex.get(node_id, 0.0))
                + cosine_normalized(sem.get(node_id, -1.0))
            ) / 2.0
            combined[node_id] = score
        return self._rank(combined, k, "hybrid", filters)

    def search(self, strategy: str, query_text: str, k: int,
               filters: SearchFilters | None = None) -> list[ScoredHit]:
        if strategy == "lexical":
            return self.lexical_search(query_text, k, filters)
        if strategy == "semantic":
            return self.semantic_search(query_text, k, filters)
        if strategy in ("hybrid", "structural"):
            # Structural exploration starts from hybrid seeds; the walker
            # supplies the structural moves themselves.
            return self.hybrid_search(query_text, k, filters)
        raise ValueError(f"unknown strategy {strategy!r}")

    def neighbors(self, node_id: str, edge_kind: str) -> list[str]:
        return self.graph.neighbors(node_id, edge_kind)

    def similarity(self, query_text: str, node_id: str) -> float:
        """Cosine similarity between a query and one node."""
        row = self._node_row(node_id)
        return float(row @ self._query_vector(query_text))

    def node_similarity(self, a: str, b: str) -> float:
        return float(self._node_row(a) @ self._node_row(b))

    def _query_vector(self, text: str):
        cached = self._query_cache.get(text)
        if cached is None:
            cached = embed_query(self.embed_provider, text)
            self._query_cache[text] = cached
        return cached

    def _node_row(self, node_id: str):
        idx = self._node_index().get(node_id)
        if idx is None:
            raise KeyError(node_id)
        return self.vectors.matrix[idx]

    def _node_index(self) -> dict[str, int]:
        cached = self._query_cache.get("\x00node_index")
        if cached is None:
            cached = {n: i for i, n in enumerate(self.vectors.node_ids)}
            self._query_cache["\x00node_index"] = cached
        return cached
