"""Provider contracts: roles, profiles, errors, and structured-output schemas.

Every learned component sits behind one of these roles. Deterministic stubs
implement each role offline; remote adapters may replace any of them behind
the same interface.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Protocol, Sequence, runtime_checkable

ROLES = ("embed", "decompose", "plan", "rerank", "support", "draft", "localize", "judge")


class ProviderError(Exception):
    """Base class for provider failures."""

    retryable = False


class ProviderTimeout(ProviderError):
    retryable = True


class ProviderRateLimited(ProviderError):
    retryable = True


class ProviderUnavailable(ProviderError):
    retryable = True


class SchemaViolation(ProviderError):
    """Structured output failed validation; never silently coerced."""

    retryable = False


@dataclass(frozen=True)
class ProviderProfile:
    role: str
    implementation: str
    deterministic: bool
    config: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "role": self.role,
            "implementation": self.implementation,
            "deterministic": self.deterministic,
            "config": dict(self.config),
        }


@dataclass(frozen=True)
class FieldSpec:
    """One field of a closed structured-output schema."""

    name: str
    kind: str  # "int" or "str"
    minimum: int | None = None
    maximum: int | None = None


@dataclass(frozen=True)
class StructuredSchema:
    """Closed field list; outputs must carry exactly these fields."""

    fields: tuple[FieldSpec, ...]

    def validate(self, payload: object) -> dict:
        """Return the payload as a dict or raise :class:`SchemaViolation`."""
        if not isinstance(payload, dict):
            raise SchemaViolation(f"expected object, got {type(payload).__name__}")
        expected = {f.name for f in self.fields}
        extra = set(payload) - expected
        if extra:
            raise SchemaViolation(f"unexpected fields: {sorted(extra)}")
        for spec in self.fields:
            if spec.name not in payload:
                raise SchemaViolation(f"missing field: {spec.name}")
            value = payload[spec.name]
            if spec.kind == "int":
                if not isinstance(value, int) or isinstance(value, bool):
                    raise SchemaViolation(f"field {spec.name} must be an integer")
                if spec.minimum is not None and value < spec.minimum:
                    raise SchemaViolation(f"field {spec.name}={value} below {spec.minimum}")
                if spec.maximum is not None and value > spec.maximum:
                    raise SchemaViolation(f"field {spec.name}={value} above {spec.maximum}")
            elif spec.kind == "str":
                if not isinstance(value, str):
                    raise SchemaViolation(f"field {spec.name} must be a string")
        return dict(payload)


@runtime_checkable
class EmbedProvider(Protocol):
    profile: ProviderProfile

    def embed(self, texts: Sequence[str]) -> "list[list[float]]": ...


@runtime_checkable
class CompletionProvider(Protocol):
    """Role provider returning structured output for a prompt."""

    profile: ProviderProfile

    def complete(self, prompt: str, schema: StructuredSchema | None = None) -> dict: ...
