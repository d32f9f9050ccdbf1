"""Document, block, and chunk-node types plus the immutable corpus container."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from groundline.text import count_tokens

MAX_NODE_TOKENS = 2048

BLOCK_KINDS = ("heading", "paragraph", "table_cell")


@dataclass(frozen=True)
class Block:
    """One structural unit of a source document (heading, paragraph, cell)."""

    path: str
    kind: str
    page: int
    text: str


@dataclass(frozen=True)
class SourceDocument:
    doc_id: str
    title: str
    language: str
    source_uri: str
    page_count: int
    blocks: tuple[Block, ...]


@dataclass(frozen=True)
class ChunkNode:
    """A bounded fragment of a document addressing an exact byte span.

    ``byte_range`` indexes into the UTF-8 encoding of the document's
    canonical text; slicing those bytes and decoding reproduces ``text``.
    """

    node_id: str
    doc_id: str
    hier_path: str
    kind: str
    page: int
    text: str
    byte_range: tuple[int, int]
    token_count: int


@dataclass(frozen=True)
class CorpusVersion:
    version_id: str
    created_at: str
    doc_count: int
    node_count: int


def make_node_id(doc_id: str, hier_path: str, byte_start: int, byte_end: int) -> str:
    """Deterministic 128-bit content id; rebuilds reproduce identical ids."""
    payload = f"{doc_id}\x1f{hier_path}\x1f{byte_start}\x1f{byte_end}"
    return hashlib.blake2b(payload.encode("utf-8"), digest_size=16).hexdigest()


def make_node(doc_id: str, hier_path: str, kind: str, page: int, text: str,
              byte_range: tuple[int, int]) -> ChunkNode:
    return ChunkNode(
        node_id=make_node_id(doc_id, hier_path, byte_range[0], byte_range[1]),
        doc_id=doc_id,
        hier_path=hier_path,
        kind=kind,
        page=page,
        text=text,
        byte_range=byte_range,
        token_count=count_tokens(text),
    )


def compute_version_id(nodes: list[ChunkNode]) -> str:
    """Content hash over node ids and texts, in corpus order."""
    h = hashlib.blake2b(digest_size=16)
    for node in nodes:
        h.update(node.node_id.encode("ascii"))
        h.update(b"\x1f")
        h.update(node.text.encode("utf-8"))
        h.update(b"\x1e")
    return h.hexdigest()


@dataclass
class Corpus:
    """A built corpus: documents, canonical texts, chunk nodes, and version.

    Instances are write-once; nothing mutates after construction, so a
    corpus is safe to share across concurrent readers.
    """

    documents: dict[str, SourceDocument]
    canonical: dict[str, str]
    nodes: list[ChunkNode]
    version: CorpusVersion
    _by_id: dict[str, ChunkNode] = field(default_factory=dict, repr=False)
    _by_doc: dict[str, list[ChunkNode]] = field(default_factory=dict, repr=False)
    _canonical_bytes: dict[str, bytes] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        self._by_id = {n.node_id: n for n in self.nodes}
        self._by_doc = {}
        for n in self.nodes:
            self._by_doc.setdefault(n.doc_id, []).append(n)
        self._canonical_bytes = {
            doc_id: text.encode("utf-8") for doc_id, text in self.canonical.items()
        }

    def node(self, node_id: str) -> ChunkNode:
        return self._by_id[node_id]

    def has_node(self, node_id: str) -> bool:
        return node_id in self._by_id

    def doc_nodes(self, doc_id: str) -> list[ChunkNode]:
        return self._by_doc.get(doc_id, [])

    def canonical_bytes(self, doc_id: str) -> bytes:
        return self._canonical_bytes[doc_id]

    def slice_bytes(self, doc_id: str, start: int, end: int) -> str:
        """Decode the canonical byte span ``[start, end)`` of a document."""
        return self._canonical_bytes[doc_id][start:end].decode("utf-8")
