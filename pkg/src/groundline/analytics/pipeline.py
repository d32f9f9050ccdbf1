"""Sessionization, classification, forward-fill imputation, and reporting."""

from __future__ import annotations

import datetime as dt
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from groundline.analytics.normalize import content_tokens, match_tokens
from groundline.analytics.taxonomy import TaxonomySet, classify_query
from groundline.service.app import abstention_series
from groundline.service.storage import QueryLogEntry

SESSION_GAP_SECONDS = 3600  # strict: a gap of exactly one hour stays in-session


@dataclass
class ClassifiedQuery:
    entry: QueryLogEntry
    session: str = ""
    theme: str | None = None
    task: str | None = None
    conversational: bool = False
    imputed: bool = False


def read_log(path: Path) -> list[QueryLogEntry]:
    entries = []
    with Path(path).open("r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            record = json.loads(line)
            entries.append(QueryLogEntry(**record))
    return entries


def sessionize(entries: list[QueryLogEntry]) -> list[ClassifiedQuery]:
    """Assign analytic session ids per user; a new session starts only when
    the inactivity gap exceeds one hour (3600s exactly stays in-session)."""
    rows = [ClassifiedQuery(entry=e) for e in entries]
    by_user: dict[str, list[ClassifiedQuery]] = {}
    for row in rows:
        by_user.setdefault(row.entry.user_hash, []).append(row)
    for user, user_rows in by_user.items():
        user_rows.sort(key=lambda r: r.entry.ts)
        session_no = 1
        prev_ts = None
        for row in user_rows:
            ts = dt.datetime.fromisoformat(row.entry.ts)
            if prev_ts is not None and (ts - prev_ts).total_seconds() > SESSION_GAP_SECONDS:
                session_no += 1
            row.session = f"{user}:{session_no}"
            prev_ts = ts
    return rows


def classify(rows: list[ClassifiedQuery], taxonomies: TaxonomySet,
             localizer=None) -> list[ClassifiedQuery]:
    for row in rows:
        text = row.entry.query
        if row.entry.language != "en" and localizer is not None:
            text = localizer.localize([text], "en")[0]
        row.theme, row.task, row.conversational = classify_query(text, taxonomies)
    return rows


def impute(rows: list[ClassifiedQuery]) -> list[ClassifiedQuery]:
    """Forward-fill missing labels from the nearest preceding labeled query
    in the same session; conversational rows neither give nor take labels."""
    last_by_session: dict[str, tuple[str | None, str | None]] = {}
    for row in rows:
        if row.conversational:
            continue
        prev_theme, prev_task = last_by_session.get(row.session, (None, None))
        filled = False
        if row.theme is None and prev_theme is not None:
            row.theme = prev_theme
            filled = True
        if row.task is None and prev_task is not None:
            row.task = prev_task
            filled = True
        row.imputed = filled
        last_by_session[row.session] = (row.theme, row.task)
    return rows


@dataclass
class AnalyticsReport:
    theme_distribution: dict[str, float]
    task_distribution: dict[str, float]
    language_distribution: dict[str, float]
    abstention_series: list[dict]
    citation_summary: dict[str, float]
    theme_terms: dict[str, list[str]]
    totals: dict[str, int] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "theme_distribution": self.theme_distribution,
            "task_distribution": self.task_distribution,
            "language_distribution": self.language_distribution,
            "abstention_series": self.abstention_series,
            "citation_summary": self.citation_summary,
            "theme_terms": self.theme_terms,
            "totals": self.totals,
        }


def _distribution(labels: list[str]) -> dict[str, float]:
    if not labels:
        return {}
    counts: dict[str, int] = {}
    for label in labels:
        counts[label] = counts.get(label, 0) + 1
    total = len(labels)
    return {label: round(100.0 * n / total, 1) for label, n in sorted(counts.items())}


def _tfidf_terms(rows: list[ClassifiedQuery], top_n: int = 10) -> dict[str, list[str]]:
    """Representative terms per theme: a reporting aid, not a classifier input."""
    docs: dict[str, list[str]] = {}
    for row in rows:
        if row.theme is None or row.conversational:
            continue
        docs.setdefault(row.theme, []).extend(
            content_tokens(match_tokens(row.entry.query)))
    if not docs:
        return {}
    doc_freq: dict[str, int] = {}
    for tokens in docs.values():
        for term in set(tokens):
            doc_freq[term] = doc_freq.get(term, 0) + 1
    n_docs = len(docs)
    out = {}
    for theme, tokens in docs.items():
        counts: dict[str, int] = {}
        for term in tokens:
            counts[term] = counts.get(term, 0) + 1
        scored = sorted(
            ((count * math.log(1.0 + n_docs / doc_freq[term]), term)
             for term, count in counts.items()),
            key=lambda pair: (-pair[0], pair[1]))
        out[theme] = [term for _, term in scored[:top_n]]
    return out


def report(rows: list[ClassifiedQuery], window_days: int = 5) -> AnalyticsReport:
    entries = [row.entry for row in rows]
    themed = [row.theme for row in rows if row.theme is not None and not row.conversational]
    tasked = [row.task for row in rows if row.task is not None and not row.conversational]
    languages = [entry.language for entry in entries]
    grounded_citations = [entry.citations for entry in entries if entry.kind == "grounded"]
    citation_summary = {
        "mean": round(sum(grounded_citations) / len(grounded_citations), 2)
        if grounded_citations else 0.0,
        "min": min(grounded_citations) if grounded_citations else 0,
        "max": max(grounded_citations) if grounded_citations else 0,
    }
    return AnalyticsReport(
        theme_distribution=_distribution(themed),
        task_distribution=_distribution(tasked),
        language_distribution=_distribution(languages),
        abstention_series=abstention_series(entries, window_days),
        citation_summary=citation_summary,
        theme_terms=_tfidf_terms(rows),
        totals={
            "entries": len(entries),
            "themed": len(themed),
            "tasked": len(tasked),
            "conversational": sum(1 for r in rows if r.conversational),
            "imputed": sum(1 for r in rows if r.imputed),
        },
    )


def run_pipeline(entries: list[QueryLogEntry], taxonomies: TaxonomySet,
                 localizer=None, window_days: int = 5) -> AnalyticsReport:
    rows = sessionize(entries)
    classify(rows, taxonomies, localizer)
    impute(rows)
    return report(rows, window_days)
