"""Citation anchors: node-relative char spans composed into document bytes."""

from __future__ import annotations

import hashlib

from groundline.agents.types import EvidencePacket
from groundline.corpus.model import Corpus
from groundline.envelope import CitationAnchor


class VersionConflictError(Exception):
    """A packet references a node the current corpus version does not hold."""


def _anchor_id(version_id: str, node_id: str, byte_start: int, byte_end: int) -> str:
    payload = f"{version_id}\x1f{node_id}\x1f{byte_start}\x1f{byte_end}"
    return hashlib.blake2b(payload.encode("utf-8"), digest_size=16).hexdigest()


def build_anchor(packet: EvidencePacket, corpus: Corpus) -> CitationAnchor:
    """Anchor for a packet's span; raises on stale node references."""
    span = packet.spans[0]
    if not corpus.has_node(span.node_id):
        raise VersionConflictError(
            f"node {span.node_id} not in corpus version {corpus.version.version_id}")
    node = corpus.node(span.node_id)
    char_start, char_end = span.char_range
    prefix_bytes = len(node.text[:char_start].encode("utf-8"))
    quote_bytes = len(node.text[char_start:char_end].encode("utf-8"))
    byte_start = node.byte_range[0] + prefix_bytes
    byte_end = byte_start + quote_bytes
    return CitationAnchor(
        anchor_id=_anchor_id(corpus.version.version_id, node.node_id, byte_start, byte_end),
        node_id=node.node_id,
        doc_id=node.doc_id,
        page=node.page,
        byte_range=(byte_start, byte_end),
        quote=span.quote,
    )
