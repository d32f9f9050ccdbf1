"""Remote provider adapter speaking a chat-completions wire format.

Configuration comes from ``GROUNDLINE_PROVIDER_URL`` and
``GROUNDLINE_PROVIDER_KEY``; the key is sent as a bearer token and never
logged. Calls respect a per-call timeout and a configurable in-flight cap.
"""

from __future__ import annotations

import json
import os
import threading
from typing import Sequence

import httpx

from groundline.providers.base import (
    ProviderProfile,
    ProviderRateLimited,
    ProviderTimeout,
    ProviderUnavailable,
    SchemaViolation,
    StructuredSchema,
)

URL_ENV = "GROUNDLINE_PROVIDER_URL"
KEY_ENV = "GROUNDLINE_PROVIDER_KEY"


def _env_url(url: str | None) -> str:
    resolved = url or os.environ.get(URL_ENV)
    if not resolved:
        raise ProviderUnavailable(f"no provider URL configured ({URL_ENV} unset)")
    return resolved.rstrip("/")


class RemoteCompletionProvider:
    """Structured completion over HTTP for one provider role."""

    def __init__(self, role: str, model: str, url: str | None = None,
                 key: str | None = None, timeout: float = 30.0,
                 max_in_flight: int = 4, transport: httpx.BaseTransport | None = None):
        self.role = role
        self.model = model
        self.url = _env_url(url)
        self._key = key or os.environ.get(KEY_ENV, "")
        self.timeout = timeout
        self._gate = threading.BoundedSemaphore(max_in_flight)
        self._client = httpx.Client(timeout=timeout, transport=transport)
        self.profile = ProviderProfile(
            role=role, implementation="remote-chat", deterministic=False,
            config={"endpoint": self.url, "model": model, "timeout": timeout,
                    "max_in_flight": max_in_flight},
        )

    def _headers(self) -> dict:
        headers = {"Content-Type": "application/json"}
        if self._key:
            headers["Authorization"] = f"Bearer {self._key}"
        return headers

    def complete(self, prompt: str, schema: StructuredSchema | None = None) -> dict:
        body = {
            "model": self.model,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": 0,
        }
        with self._gate:
            try:
                response = self._client.post(
                    f"{self.url}/chat/completions", json=body, headers=self._headers())
            except httpx.TimeoutException as exc:
                raise ProviderTimeout(f"{self.role} call timed out after {self.timeout}s") from exc
            except httpx.TransportError as exc:
                raise ProviderUnavailable(f"{self.role} endpoint unreachable: {exc}") from exc
        if response.status_code == 429:
            raise ProviderRateLimited(f"{self.role} rate limited")
        if response.status_code >= 500:
            raise ProviderUnavailable(f"{self.role} endpoint returned {response.status_code}")
        if response.status_code != 200:
            raise SchemaViolation(f"{self.role} endpoint returned {response.status_code}")
        try:
            content = response.json()["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError, json.JSONDecodeError) as exc:
            raise SchemaViolation(f"{self.role} reply missing choices[0].message.content") from exc
        try:
            payload = json.loads(content)
        except json.JSONDecodeError as exc:
            raise SchemaViolation(f"{self.role} reply is not JSON: {exc}") from exc
        if schema is not None:
            return schema.validate(payload)
        if not isinstance(payload, dict):
            raise SchemaViolation(f"{self.role} reply is not a JSON object")
        return payload


class RemoteEmbedProvider:
    """Embedding calls against an ``/embeddings`` endpoint."""

    def __init__(self, model: str, dim: int, url: str | None = None,
                 key: str | None = None, timeout: float = 30.0,
                 max_in_flight: int = 4, transport: httpx.BaseTransport | None = None):
        self.model = model
        self.dim = dim
        self.url = _env_url(url)
        self._key = key or os.environ.get(KEY_ENV, "")
        self.timeout = timeout
        self._gate = threading.BoundedSemaphore(max_in_flight)
        self._client = httpx.Client(timeout=timeout, transport=transport)
        self.profile = ProviderProfile(
            role="embed", implementation="remote-embeddings", deterministic=False,
            config={"endpoint": self.url, "model": model, "dim": dim, "timeout": timeout},
        )

    def embed(self, texts: Sequence[str]) -> list[list[float]]:
        headers = {"Content-Type": "application/json"}
        if self._key:
            headers["Authorization"] = f"Bearer {self._key}"
        with self._gate:
            try:
                response = self._client.post(
                    f"{self.url}/embeddings",
                    json={"model": self.model, "input": list(texts)},
                    headers=headers)
            except httpx.TimeoutException as exc:
                raise ProviderTimeout(f"embed call timed out after {self.timeout}s") from exc
            except httpx.TransportError as exc:
                raise ProviderUnavailable(f"embed endpoint unreachable: {exc}") from exc
        if response.status_code == 429:
            raise ProviderRateLimited("embed rate limited")
        if response.status_code != 200:
            raise ProviderUnavailable(f"embed endpoint returned {response.status_code}")
        try:
            data = response.json()["data"]
            vectors = [row["embedding"] for row in data]
        except (KeyError, TypeError, json.JSONDecodeError) as exc:
            raise SchemaViolation(f"embed reply malformed: {exc}") from exc
        for vec in vectors:
            if len(vec) != self.dim:
                raise SchemaViolation(
                    f"embed reply dimension {len(vec)} != configured {self.dim}")
        return vectors
