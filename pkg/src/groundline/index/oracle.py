"""Brute-force reference scorers.

These recount every statistic directly from node texts, independently of
the inverted index and vector matrix, and exist so that any search result
on a small corpus can be checked exactly (same formula, same tie-break).
"""

from __future__ import annotations

import math

from groundline.corpus.model import Corpus
from groundline.index.lexical import DEFAULT_B, DEFAULT_K1
from groundline.index.search import ScoredHit, SearchFilters, quantize
from groundline.text import word_tokens


def brute_force_lexical(corpus: Corpus, query_text: str, k: int,
                        filters: SearchFilters | None = None,
                        k1: float = DEFAULT_K1, b: float = DEFAULT_B) -> list[ScoredHit]:
    filters = filters or SearchFilters()
    query_tokens = set(word_tokens(query_text))
    if not query_tokens:
        return []
    node_tokens = {n.node_id: word_tokens(n.text) for n in corpus.nodes}
    n_total = len(corpus.nodes)
    if n_total == 0:
        return []
    avg_len = sum(len(t) for t in node_tokens.values()) / n_total
    df = {t: sum(1 for toks in node_tokens.values() if t in toks) for t in query_tokens}
    scored = []
    for node in corpus.nodes:
        tokens = node_tokens[node.node_id]
        score = 0.0
        for t in sorted(query_tokens):
            tf = tokens.count(t)
            if tf == 0:
                continue
            idf = math.log(1.0 + (n_total - df[t] + 0.5) / (df[t] + 0.5))
            norm = 1.0 - b + b * len(tokens) / avg_len
            score += idf * tf * (k1 + 1.0) / (tf + k1 * norm)
        if score > 0.0 and filters.admits(node):
            scored.append((node.node_id, quantize(score)))
    scored.sort(key=lambda pair: (-pair[1], pair[0]))
    return [ScoredHit(node_id=n, score=s, source="lexical") for n, s in scored[:k]]


def brute_force_semantic(corpus: Corpus, query_text: str, k: int, embed_provider,
                         filters: SearchFilters | None = None,
                         node_vectors: dict[str, list[float]] | None = None) -> list[ScoredHit]:
    """Exhaustive cosine scan; ``node_vectors`` may be precomputed to avoid
    re-embedding the corpus on every call."""
    filters = filters or SearchFilters()
    if not corpus.nodes:
        return []
    query_vec = embed_provider.embed([query_text])[0]
    scored = []
    for node in corpus.nodes:
        if not filters.admits(node):
            continue
        if node_vectors is not None:
            node_vec = node_vectors[node.node_id]
        else:
            node_vec = embed_provider.embed([node.text])[0]
        score = sum(a * b_ for a, b_ in zip(query_vec, node_vec))
        scored.append((node.node_id, quantize(score)))
    scored.sort(key=lambda pair: (-pair[1], pair[0]))
    return [ScoredHit(node_id=n, score=s, source="semantic") for n, s in scored[:k]]
