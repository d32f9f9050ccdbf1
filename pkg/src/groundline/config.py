"""Pipeline configuration: every threshold the gates and walkers use.

Defaults are the shipped operating point; deployments override via a JSON
config file (the ``serve``/``query`` CLI ``--config`` flag). Each response
records the thresholds that produced it inside its verification report.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields
from pathlib import Path


@dataclass
class PipelineConfig:
    # Lexical scoring
    bm25_k1: float = 1.2
    bm25_b: float = 0.75
    # Embedding stub
    embed_dim: int = 256
    # Retrieval planning
    default_top_k: int = 5
    # Tree walk
    walk_lambda: float = 0.5          # novelty penalty weight in marginal gain
    walk_coverage_threshold: float = 0.8
    walk_gain_epsilon: float = 0.05
    walk_stall_patience: int = 3
    walk_step_budget: int = 32
    walk_semantic_pool: int = 32      # semantic-neighbor candidates per sub-query
    # Evidence packets
    score_alpha: float = 0.5          # final = alpha*base + (1-alpha)*rerank
    span_relevance_floor: float = 0.2  # min span-vs-subquery overlap to form a packet
    # Verification gate
    coverage_min: float = 0.8
    agreement_min: float = 0.6
    evidence_min_packets: int = 1
    evidence_min_tokens: int = 100
    tau_support: float = 0.5
    tau_agree: float = 0.4
    single_source_agreement: bool = True  # single-source claims count as consistent
    # Synthesis
    draft_packets_per_subquery: int = 2
    near_miss_floor: float = 0.2
    # Service
    preferred_doc_boost: float = 0.1

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, payload: dict) -> "PipelineConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(payload) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**payload)

    @classmethod
    def load(cls, path: Path | str) -> "PipelineConfig":
        return cls.from_json(json.loads(Path(path).read_text(encoding="utf-8")))

    def fingerprint(self) -> str:
        import hashlib

        blob = json.dumps(self.to_json(), sort_keys=True).encode("utf-8")
        return hashlib.blake2b(blob, digest_size=8).hexdigest()
