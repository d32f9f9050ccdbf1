"""Evidence packet drafting: span trimming, dedup, two-stage scoring.

The base retrieval score and the provider's cross-score fuse as
``final = alpha * base + (1 - alpha) * rerank``. Duplicate spans collapse
only within a document; identical text from different documents stays, so
conflicting perspectives survive ranking.
"""

from __future__ import annotations

import hashlib
from typing import Sequence

from groundline.agents.types import EvidencePacket, EvidenceSpan, SubQuery
from groundline.agents.walk import Selection
from groundline.config import PipelineConfig
from groundline.corpus.model import Corpus
from groundline.text import content_words, jaccard, sentence_spans


def _packet_id(subquery_index: int, node_id: str, start: int, end: int) -> str:
    payload = f"{subquery_index}\x1f{node_id}\x1f{start}\x1f{end}"
    return hashlib.blake2b(payload.encode("utf-8"), digest_size=16).hexdigest()


def best_sentence_span(node_text: str, query_text: str) -> tuple[int, int, float]:
    """Trimmed char range of the sentence most relevant to the query.

    Relevance is content-word Jaccard; ties go to the earliest sentence.
    Returns ``(start, end, relevance)``; spans below the configured floor
    never become packets (a node with nothing relevant contributes none).
    """
    query_words = content_words(query_text)
    best = None
    best_score = -1.0
    for start, end in sentence_spans(node_text):
        sentence = node_text[start:end]
        score = jaccard(content_words(sentence), query_words)
        if score > best_score:
            best_score = score
            best = (start, end)
    if best is None:
        return (0, 0, 0.0)
    start, end = best
    raw = node_text[start:end]
    stripped_left = len(raw) - len(raw.lstrip())
    stripped_right = len(raw) - len(raw.rstrip())
    return (start + stripped_left, end - stripped_right, best_score)


def draft_packets(selection: Selection, subqueries: Sequence[SubQuery], corpus: Corpus,
                  rerank_provider, config: PipelineConfig | None = None) -> list[EvidencePacket]:
    config = config or PipelineConfig()
    alpha = config.score_alpha
    drafts: list[EvidencePacket] = []
    for subquery_index, node_id, base_score in selection.entries:
        node = corpus.node(node_id)
        sq = subqueries[subquery_index]
        start, end, relevance = best_sentence_span(node.text, sq.text)
        if start == end or relevance < config.span_relevance_floor:
            continue
        quote = node.text[start:end]
        rerank_score = float(rerank_provider.rerank(sq.text, [quote])[0])
        final_score = alpha * base_score + (1.0 - alpha) * rerank_score
        drafts.append(EvidencePacket(
            packet_id=_packet_id(subquery_index, node_id, start, end),
            subquery_index=subquery_index,
            spans=(EvidenceSpan(node_id=node_id, char_range=(start, end), quote=quote),),
            base_score=base_score,
            rerank_score=rerank_score,
            final_score=final_score,
            doc_id=node.doc_id,
            hier_path=node.hier_path,
            page=node.page,
        ))

    # Dedup within a document by normalized quote text, keeping the highest
    # base score; distinct documents never collapse into each other.
    drafts.sort(key=lambda p: (-p.base_score, p.packet_id))
    kept: list[EvidencePacket] = []
    seen: set[tuple[str, str]] = set()
    for packet in drafts:
        key = (packet.doc_id, " ".join(packet.spans[0].quote.lower().split()))
        if key in seen:
            continue
        seen.add(key)
        kept.append(packet)

    kept.sort(key=lambda p: (-p.final_score, p.packet_id))
    return kept
