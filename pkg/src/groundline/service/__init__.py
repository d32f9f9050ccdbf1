"""HTTP service: query endpoint, citations, notes, export, telemetry."""

from groundline.service.app import (
    CorpusRegistry,
    abstention_series,
    canonical_json,
    create_app,
)
from groundline.service.context import context_window, detect_language
from groundline.service.storage import QueryLogEntry, ServiceStore, hash_user

__all__ = [
    "CorpusRegistry",
    "QueryLogEntry",
    "ServiceStore",
    "abstention_series",
    "canonical_json",
    "context_window",
    "create_app",
    "detect_language",
    "hash_user",
]
