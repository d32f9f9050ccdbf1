"""Document ingestion, canonical text, and bounded hierarchical chunking."""

from groundline.corpus.canonical import canonicalize
from groundline.corpus.chunking import ChunkFlag, ChunkResult, chunk
from groundline.corpus.ingest import IngestError, IngestReport, build_corpus, ingest
from groundline.corpus.model import (
    MAX_NODE_TOKENS,
    Block,
    ChunkNode,
    Corpus,
    CorpusVersion,
    SourceDocument,
    make_node_id,
)
from groundline.corpus.store import load_corpus, save_corpus

__all__ = [
    "MAX_NODE_TOKENS",
    "Block",
    "ChunkFlag",
    "ChunkNode",
    "ChunkResult",
    "Corpus",
    "CorpusVersion",
    "IngestError",
    "IngestReport",
    "SourceDocument",
    "build_corpus",
    "canonicalize",
    "chunk",
    "ingest",
    "load_corpus",
    "make_node_id",
    "save_corpus",
]
