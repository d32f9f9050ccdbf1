"""Inverted index with BM25 scoring (k1 = 1.2, b = 0.75 by default)."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from groundline.corpus.model import Corpus
from groundline.text import word_tokens

DEFAULT_K1 = 1.2
DEFAULT_B = 0.75


@dataclass
class LexicalIndex:
    postings: dict[str, list[tuple[str, int]]]
    node_len: dict[str, int]
    k1: float = DEFAULT_K1
    b: float = DEFAULT_B
    _avg_len: float = field(init=False, default=0.0)

    def __post_init__(self) -> None:
        self._avg_len = (
            sum(self.node_len.values()) / len(self.node_len) if self.node_len else 0.0
        )

    @property
    def size(self) -> int:
        return len(self.node_len)

    def idf(self, token: str) -> float:
        df = len(self.postings.get(token, ()))
        n = len(self.node_len)
        return math.log(1.0 + (n - df + 0.5) / (df + 0.5))

    def score(self, query_tokens: list[str]) -> dict[str, float]:
        """BM25 score for every node containing at least one query token.

        Tokens accumulate in sorted order so the floating-point sum is
        reproducible across processes.
        """
        scores: dict[str, float] = {}
        if not self.node_len:
            return scores
        for token in sorted(set(query_tokens)):
            rows = self.postings.get(token)
            if not rows:
                continue
            idf = self.idf(token)
            for node_id, tf in rows:
                length_norm = 1.0 - self.b + self.b * self.node_len[node_id] / self._avg_len
                gain = idf * tf * (self.k1 + 1.0) / (tf + self.k1 * length_norm)
                scores[node_id] = scores.get(node_id, 0.0) + gain
        return scores


def build_lexical(corpus: Corpus, k1: float = DEFAULT_K1, b: float = DEFAULT_B) -> LexicalIndex:
    postings: dict[str, dict[str, int]] = {}
    node_len: dict[str, int] = {}
    for node in corpus.nodes:
        tokens = word_tokens(node.text)
        node_len[node.node_id] = len(tokens)
        for token in tokens:
            postings.setdefault(token, {}).setdefault(node.node_id, 0)
            postings[token][node.node_id] += 1
    sorted_postings = {
        token: sorted(rows.items()) for token, rows in postings.items()
    }
    return LexicalIndex(postings=sorted_postings, node_len=node_len, k1=k1, b=b)
