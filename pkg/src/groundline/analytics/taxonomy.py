"""Curated keyword taxonomies with weighted, phrase-aware matching."""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from groundline.analytics.normalize import lemmatize, match_tokens


@dataclass(frozen=True)
class Keyword:
    phrase: str            # lemmatized, space-joined
    weight: float
    multiword: bool


@dataclass(frozen=True)
class TaxonomyEntry:
    label: str
    keywords: tuple[Keyword, ...]


@dataclass(frozen=True)
class Taxonomy:
    name: str
    entries: tuple[TaxonomyEntry, ...]

    def match(self, tokens: list[str]) -> str | None:
        """Best label by summed keyword weights; multiword matches count
        double and outrank single-word matches on score ties; remaining ties
        go to entry order."""
        joined = " " + " ".join(tokens) + " "
        token_set = set(tokens)
        best_label = None
        best_key = None
        for index, entry in enumerate(self.entries):
            score = 0.0
            multiword_hit = False
            for kw in entry.keywords:
                if kw.multiword:
                    if f" {kw.phrase} " in joined:
                        score += 2.0 * kw.weight
                        multiword_hit = True
                elif kw.phrase in token_set:
                    score += kw.weight
            if score <= 0.0:
                continue
            key = (score, multiword_hit, -index)
            if best_key is None or key > best_key:
                best_key = key
                best_label = entry.label
        return best_label


def _lemmatize_phrase(phrase: str) -> str:
    return " ".join(lemmatize(w) for w in phrase.lower().split())


def load_taxonomy(payload: dict, name: str) -> Taxonomy:
    entries = []
    seen = set()
    for item in payload["entries"]:
        label = item["label"]
        if label in seen:
            raise ValueError(f"duplicate taxonomy label {label!r}")
        seen.add(label)
        keywords = []
        for kw in item["keywords"]:
            phrase = _lemmatize_phrase(kw["phrase"])
            keywords.append(Keyword(
                phrase=phrase,
                weight=float(kw.get("weight", 1.0)),
                multiword=" " in phrase,
            ))
        entries.append(TaxonomyEntry(label=label, keywords=tuple(keywords)))
    return Taxonomy(name=name, entries=tuple(entries))


def load_taxonomy_file(path: Path, name: str | None = None) -> Taxonomy:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    return load_taxonomy(payload, name or Path(path).stem)


@dataclass(frozen=True)
class TaxonomySet:
    themes: Taxonomy
    tasks: Taxonomy
    uses: Taxonomy | None
    conversational: tuple[str, ...]  # lemmatized phrases

    def is_conversational(self, tokens: list[str]) -> bool:
        joined = " " + " ".join(tokens) + " "
        return any(f" {phrase} " in joined for phrase in self.conversational)


def _load_default(name: str) -> dict:
    ref = resources.files("groundline.analytics").joinpath(f"data/{name}")
    return json.loads(ref.read_text(encoding="utf-8"))


def default_taxonomies() -> TaxonomySet:
    return TaxonomySet(
        themes=load_taxonomy(_load_default("policy_themes.json"), "policy_themes"),
        tasks=load_taxonomy(_load_default("query_types.json"), "query_types"),
        uses=load_taxonomy(_load_default("intended_use.json"), "intended_use"),
        conversational=tuple(
            _lemmatize_phrase(p) for p in _load_default("conversational.json")["phrases"]
        ),
    )


def taxonomies_from_dir(directory: Path) -> TaxonomySet:
    directory = Path(directory)
    uses_path = directory / "intended_use.json"
    conversational_path = directory / "conversational.json"
    conversational: tuple[str, ...] = ()
    if conversational_path.exists():
        payload = json.loads(conversational_path.read_text(encoding="utf-8"))
        conversational = tuple(_lemmatize_phrase(p) for p in payload["phrases"])
    return TaxonomySet(
        themes=load_taxonomy_file(directory / "policy_themes.json"),
        tasks=load_taxonomy_file(directory / "query_types.json"),
        uses=load_taxonomy_file(uses_path) if uses_path.exists() else None,
        conversational=conversational,
    )


def classify_query(query: str, taxonomies: TaxonomySet,
                   localizer=None) -> tuple[str | None, str | None, bool]:
    """(theme, task, conversational): the conversational list wins first."""
    tokens = match_tokens(query, localizer)
    if taxonomies.is_conversational(tokens):
        return None, None, True
    return taxonomies.themes.match(tokens), taxonomies.tasks.match(tokens), False
