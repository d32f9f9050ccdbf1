"""Canonical text assembly: newline-joined blocks with exact byte offsets."""

from __future__ import annotations

from dataclasses import dataclass

from groundline.corpus.model import SourceDocument


@dataclass(frozen=True)
class BlockSpan:
    """Character and byte extents of one block inside the canonical text."""

    char_start: int
    char_end: int
    byte_start: int
    byte_end: int


def canonicalize(doc: SourceDocument) -> tuple[str, list[BlockSpan]]:
    """Join block texts with a single ``\\n`` and locate each block.

    Byte offsets index the UTF-8 encoding of the canonical text; they are
    what citations ultimately resolve against, so they must be exact.
    """
    parts: list[str] = []
    spans: list[BlockSpan] = []
    char_pos = 0
    byte_pos = 0
    for i, block in enumerate(doc.blocks):
        if i > 0:
            parts.append("\n")
            char_pos += 1
            byte_pos += 1
        text = block.text
        n_chars = len(text)
        n_bytes = len(text.encode("utf-8"))
        spans.append(BlockSpan(char_pos, char_pos + n_chars, byte_pos, byte_pos + n_bytes))
        parts.append(text)
        char_pos += n_chars
        byte_pos += n_bytes
    return "".join(parts), spans
