"""Chunking: bounded merge of sibling blocks, sentence-level splitting."""

from __future__ import annotations

from dataclasses import dataclass, field

from groundline.corpus.canonical import BlockSpan, canonicalize
from groundline.corpus.model import MAX_NODE_TOKENS, Block, ChunkNode, SourceDocument, make_node
from groundline.text import count_tokens, sentence_spans, token_spans, utf8_len


@dataclass
class ChunkFlag:
    """Non-fatal anomaly raised while chunking, reported with ingest output."""

    doc_id: str
    path: str
    page: int
    reason: str


@dataclass
class ChunkResult:
    nodes: list[ChunkNode]
    flags: list[ChunkFlag] = field(default_factory=list)


def _parent_path(path: str) -> str:
    head, _, _ = path.rpartition(".")
    return head


def chunk(doc: SourceDocument) -> ChunkResult:
    """Chunk a document into nodes of at most ``MAX_NODE_TOKENS`` tokens.

    Consecutive blocks of the same kind under the same parent merge while
    the merged node stays within the bound. An oversized block splits at
    sentence boundaries; a single oversized sentence hard-splits at token
    boundaries and is flagged.
    """
    canonical, spans = canonicalize(doc)
    result = ChunkResult(nodes=[])

    groups = _merge_groups(doc.blocks)
    for group in groups:
        first = doc.blocks[group[0]]
        first_span = spans[group[0]]
        last_span = spans[group[-1]]
        text = canonical[first_span.char_start:last_span.char_end]
        if count_tokens(text) <= MAX_NODE_TOKENS:
            result.nodes.append(
                make_node(doc.doc_id, first.path, first.kind, first.page, text,
                          (first_span.byte_start, last_span.byte_end))
            )
        else:
            # Merge groups never exceed the bound, so this is a single block.
            _split_block(doc, first, first_span, result)
    return result


def _merge_groups(blocks: tuple[Block, ...]) -> list[list[int]]:
    """Indices of consecutive same-kind siblings merged under the bound."""
    groups: list[list[int]] = []
    current: list[int] = []
    current_tokens = 0
    for i, block in enumerate(blocks):
        tokens = count_tokens(block.text)
        if current:
            prev = blocks[current[-1]]
            same_family = (
                block.kind == prev.kind
                and _parent_path(block.path) == _parent_path(prev.path)
            )
            if same_family and current_tokens + tokens <= MAX_NODE_TOKENS:
                current.append(i)
                current_tokens += tokens
                continue
            groups.append(current)
        current = [i]
        current_tokens = tokens
    if current:
        groups.append(current)
    return groups


def _split_block(doc: SourceDocument, block: Block, span: BlockSpan,
                 result: ChunkResult) -> None:
    """Split one oversized block into nodes at sentence boundaries."""
    pieces: list[str] = []
    pending: list[str] = []
    pending_tokens = 0
    for s_start, s_end in sentence_spans(block.text):
        sentence = block.text[s_start:s_end]
        tokens = count_tokens(sentence)
        if tokens > MAX_NODE_TOKENS:
            if pending:
                pieces.append("".join(pending))
                pending, pending_tokens = [], 0
            pieces.extend(_hard_split(sentence))
            result.flags.append(ChunkFlag(
                doc_id=doc.doc_id, path=block.path, page=block.page,
                reason=f"sentence of {tokens} tokens hard-split at token boundary",
            ))
            continue
        if pending and pending_tokens + tokens > MAX_NODE_TOKENS:
            pieces.append("".join(pending))
            pending, pending_tokens = [], 0
        pending.append(sentence)
        pending_tokens += tokens
    if pending:
        pieces.append("".join(pending))

    byte_pos = span.byte_start
    for piece in pieces:
        byte_end = byte_pos + utf8_len(piece)
        result.nodes.append(
            make_node(doc.doc_id, block.path, block.kind, block.page, piece,
                      (byte_pos, byte_end))
        )
        byte_pos = byte_end


def _hard_split(sentence: str) -> list[str]:
    """Cut an oversized sentence at token starts, every MAX_NODE_TOKENS."""
    spans = token_spans(sentence)
    cuts = [spans[i][0] for i in range(MAX_NODE_TOKENS, len(spans), MAX_NODE_TOKENS)]
    pieces = []
    prev = 0
    for cut in cuts:
        pieces.append(sentence[prev:cut])
        prev = cut
    pieces.append(sentence[prev:])
    return pieces
