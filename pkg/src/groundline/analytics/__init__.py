"""Offline log analytics: sessionization, classification, distributions."""

from groundline.analytics.normalize import content_tokens, lemmatize, match_tokens
from groundline.analytics.pipeline import (
    SESSION_GAP_SECONDS,
    AnalyticsReport,
    ClassifiedQuery,
    classify,
    impute,
    read_log,
    report,
    run_pipeline,
    sessionize,
)
from groundline.analytics.taxonomy import (
    Taxonomy,
    TaxonomySet,
    classify_query,
    default_taxonomies,
    load_taxonomy,
    load_taxonomy_file,
    taxonomies_from_dir,
)

__all__ = [
    "AnalyticsReport",
    "ClassifiedQuery",
    "SESSION_GAP_SECONDS",
    "Taxonomy",
    "TaxonomySet",
    "classify",
    "classify_query",
    "content_tokens",
    "default_taxonomies",
    "impute",
    "lemmatize",
    "load_taxonomy",
    "load_taxonomy_file",
    "match_tokens",
    "read_log",
    "report",
    "run_pipeline",
    "sessionize",
    "taxonomies_from_dir",
]
