"""Dual-backend index: document graph, BM25 postings, flat vector scan."""

from groundline.index.build import FORMAT_TAG, build, load_cross_refs, load_indexes, save_indexes
from groundline.index.graph import EDGE_KINDS, DocumentGraph, UnknownNodeError, build_graph
from groundline.index.lexical import DEFAULT_B, DEFAULT_K1, LexicalIndex, build_lexical
from groundline.index.oracle import brute_force_lexical, brute_force_semantic
from groundline.index.search import (
    Indexes,
    ScoredHit,
    SearchFilters,
    cosine_normalized,
    lexical_normalized,
)
from groundline.index.vectors import VectorIndex, build_vectors, embed_query

__all__ = [
    "DEFAULT_B",
    "DEFAULT_K1",
    "DocumentGraph",
    "EDGE_KINDS",
    "FORMAT_TAG",
    "Indexes",
    "LexicalIndex",
    "ScoredHit",
    "SearchFilters",
    "UnknownNodeError",
    "VectorIndex",
    "brute_force_lexical",
    "brute_force_semantic",
    "build",
    "build_graph",
    "build_lexical",
    "build_vectors",
    "cosine_normalized",
    "embed_query",
    "lexical_normalized",
    "load_cross_refs",
    "load_indexes",
    "save_indexes",
]
