"""Shared fixtures: built corpora, indexes, and engines reused across tests."""

from __future__ import annotations

import pytest

from groundline.config import PipelineConfig
from groundline.engine import QueryEngine
from groundline.index import build
from groundline.providers import stub_providers

from fixture_corpus import built_corpus, fixture20_documents, scatter_ref_pairs


def fixture_config() -> PipelineConfig:
    """Desk-scale config: fixture passages run 15-25 tokens, far shorter than
    the production reports the default evidence floor assumes."""
    return PipelineConfig(evidence_min_tokens=20)


@pytest.fixture(scope="session")
def corpus20():
    corpus, report = built_corpus(fixture20_documents())
    assert not report.rejected, [e.message for e in report.errors]
    return corpus


@pytest.fixture(scope="session")
def providers():
    return stub_providers()


@pytest.fixture(scope="session")
def indexes20(corpus20, providers):
    return build(corpus20, providers.embed, cross_ref_pairs=scatter_ref_pairs(corpus20))


@pytest.fixture(scope="session")
def engine20(indexes20, providers):
    return QueryEngine(indexes20, providers, fixture_config())
