"""Draft composition from ranked evidence packets."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from groundline.agents.types import EvidencePacket, SubQuery
from groundline.config import PipelineConfig


@dataclass(frozen=True)
class Placement:
    """Where one packet's sentence landed inside the draft."""

    start: int
    end: int
    packet_id: str


def draft(subqueries: Sequence[SubQuery], packets: Sequence[EvidencePacket],
          provider, config: PipelineConfig | None = None) -> tuple[str, list[Placement]]:
    """Compose a draft with one sentence per top packet per sub-query.

    Callers must abstain before drafting when no packets exist; an empty
    answer is never produced here.
    """
    if not packets:
        raise ValueError("draft requires at least one packet; abstain instead")
    config = config or PipelineConfig()
    per_subquery = config.draft_packets_per_subquery
    items = []
    for i, sq in enumerate(subqueries):
        chosen = [p for p in packets if p.subquery_index == i][:per_subquery]
        if chosen:
            items.append((sq.text, [(p.packet_id, p.spans[0].quote) for p in chosen]))
    result = provider.draft(items)
    placements = [
        Placement(start=p["start"], end=p["end"], packet_id=p["packet_id"])
        for p in result["placements"]
    ]
    return result["text"], placements


def redraft(surviving: Sequence[tuple[str, str]], provider) -> tuple[str, list[Placement]]:
    """Recompose from ``(packet_id, quote)`` pairs that survived the gate."""
    result = provider.draft([("", list(surviving))])
    placements = [
        Placement(start=p["start"], end=p["end"], packet_id=p["packet_id"])
        for p in result["placements"]
    ]
    return result["text"], placements
