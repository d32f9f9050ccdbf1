"""Model-provider boundary: contracts, deterministic stubs, remote adapters."""

from groundline.providers.base import (
    FieldSpec,
    ProviderError,
    ProviderProfile,
    ProviderRateLimited,
    ProviderTimeout,
    ProviderUnavailable,
    SchemaViolation,
    StructuredSchema,
)
from groundline.providers.stubs import (
    EMBED_DIM,
    JUDGE_DIMENSIONS,
    JUDGE_SCHEMA,
    IdentityLocalizer,
    ProviderSet,
    StubDecomposer,
    StubDrafter,
    StubEmbedder,
    StubJudge,
    StubPlanner,
    StubReranker,
    StubSupportJudge,
    stub_providers,
)
from groundline.providers.remote import (
    KEY_ENV,
    URL_ENV,
    RemoteCompletionProvider,
    RemoteEmbedProvider,
)

__all__ = [
    "EMBED_DIM",
    "FieldSpec",
    "IdentityLocalizer",
    "JUDGE_DIMENSIONS",
    "JUDGE_SCHEMA",
    "KEY_ENV",
    "ProviderError",
    "ProviderProfile",
    "ProviderRateLimited",
    "ProviderSet",
    "ProviderTimeout",
    "ProviderUnavailable",
    "RemoteCompletionProvider",
    "RemoteEmbedProvider",
    "SchemaViolation",
    "StructuredSchema",
    "StubDecomposer",
    "StubDrafter",
    "StubEmbedder",
    "StubJudge",
    "StubPlanner",
    "StubReranker",
    "StubSupportJudge",
    "URL_ENV",
    "stub_providers",
]
