"""Word-embedding providers behind one contract.

Two providers implement the lookup ``token -> d-dimensional vector``:

* :class:`StaticEmbeddingProvider` wraps a file-backed table in the plain
  word-vector text format (``token v1 v2 ... vd`` per line). Lookups ignore
  context; out-of-vocabulary tokens come back as ``None`` (ABSENT), which
  downstream featurization skips rather than zero-filling.
* :class:`RemoteEmbeddingProvider` calls a sidecar HTTP service that returns
  one context-dependent vector per token of the full document sequence;
  it never reports ABSENT, and failures raise :class:`ProviderError` so they
  are never mistaken for vocabulary gaps.

Both verify at construction that every configured section/subsection tag
phrase is embeddable, because every document's featurization needs every
tag vector (fail fast instead of dying mid-run).
"""

from __future__ import annotations

import hashlib
import os
import uuid
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import httpx
import numpy as np

from .profiles import all_tag_phrases
from .text import TextPipeline, default_pipeline

ENDPOINT_ENV_VAR = "SSTE_EMBED_ENDPOINT"


class EmbeddingError(ValueError):
    """Base class for embedding-table and provider construction failures."""


class EmbeddingFormatError(EmbeddingError):
    """A word-vector file violates the plain text format."""


class MissingTagTokensError(EmbeddingError):
    """A static table cannot embed every configured tag phrase."""

    def __init__(self, missing: Sequence[str]):
        self.missing = tuple(missing)
        super().__init__(
            "static table is missing vectors for tag phrases: " + ", ".join(self.missing)
        )


class ProviderError(RuntimeError):
    """Remote provider failure (unreachable, bad response, dimension drift)."""


@dataclass(frozen=True)
class ProviderDescriptor:
    kind: str
    dim: int
    identity: str


@dataclass(frozen=True)
class EmbeddingTable:
    """Immutable token -> vector map with a single dimension."""

    vectors: dict[str, np.ndarray]
    dim: int
    identity: str

    def __len__(self) -> int:
        return len(self.vectors)

    def __contains__(self, token: str) -> bool:
        return token in self.vectors

    def lookup(self, token: str) -> np.ndarray | None:
        return self.vectors.get(token)


def load_embedding_table(path: str | Path) -> EmbeddingTable:
    """Load a plain-text word-vector file.

    On duplicate tokens the first occurrence wins and a warning is issued.
    Inconsistent dimensions, non-numeric components, and empty files are
    errors naming the offending line.
    """
    path = Path(path)
    vectors: dict[str, np.ndarray] = {}
    dim: int | None = None
    digest = hashlib.sha256()
    with path.open("r", encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            digest.update(line.encode("utf-8"))
            parts = line.split()
            if not parts:
                continue
            token, components = parts[0], parts[1:]
            if not components:
                raise EmbeddingFormatError(f"no vector components at line {line_no}")
            if dim is None:
                dim = len(components)
            elif len(components) != dim:
                raise EmbeddingFormatError(
                    f"dimension mismatch at line {line_no}: expected {dim}, got {len(components)}"
                )
            try:
                vector = np.array([float(c) for c in components], dtype=np.float64)
            except ValueError:
                raise EmbeddingFormatError(f"non-numeric component at line {line_no}") from None
            if not np.all(np.isfinite(vector)):
                raise EmbeddingFormatError(f"non-finite component at line {line_no}")
            if token in vectors:
                warnings.warn(
                    f"duplicate token {token!r} at line {line_no}; keeping first occurrence",
                    stacklevel=2,
                )
                continue
            vectors[token] = vector
    if not vectors or dim is None:
        raise EmbeddingFormatError(f"empty embedding file: {path}")
    return EmbeddingTable(vectors, dim, f"sha256:{digest.hexdigest()[:16]}")


def _mean_vector(vectors: Sequence[np.ndarray]) -> np.ndarray:
    if len(vectors) == 1:
        return np.array(vectors[0], dtype=np.float64)
    return np.mean(np.stack(vectors), axis=0)


class StaticEmbeddingProvider:
    """Context-independent provider over an :class:`EmbeddingTable`."""

    kind = "static-table"

    def __init__(
        self,
        table: EmbeddingTable,
        tag_phrases: Sequence[str] | None = None,
        pipeline: TextPipeline | None = None,
    ):
        self.table = table
        self._pipeline = pipeline or default_pipeline()
        phrases = tuple(tag_phrases) if tag_phrases is not None else all_tag_phrases()
        self._tag_vectors: dict[str, np.ndarray] = {}
        missing = []
        for phrase in phrases:
            tokens = self._pipeline.preprocess_tag(phrase)
            token_vectors = [table.lookup(t) for t in tokens]
            if any(v is None for v in token_vectors):
                missing.append(phrase)
                continue
            self._tag_vectors[phrase] = _mean_vector(token_vectors)
        if missing:
            raise MissingTagTokensError(sorted(missing))

    @property
    def dim(self) -> int:
        return self.table.dim

    def describe(self) -> ProviderDescriptor:
        return ProviderDescriptor(self.kind, self.dim, self.table.identity)

    def embed_tokens(
        self,
        tokens: Sequence[str],
        context: Sequence[str] | None = None,
        start: int | None = None,
    ) -> list[np.ndarray | None]:
        """Per-token table lookup; ``None`` marks out-of-vocabulary tokens.

        ``context`` and ``start`` are accepted for interface parity with the
        contextual provider and ignored: static lookups are context-free.
        """
        return [self.table.lookup(token) for token in tokens]

    def embed_tag(self, phrase: str) -> np.ndarray:
        """Vector for a tag phrase: the mean of its token vectors."""
        vector = self._tag_vectors.get(phrase)
        if vector is None:
            tokens = self._pipeline.preprocess_tag(phrase)
            token_vectors = [self.table.lookup(t) for t in tokens]
            if any(v is None for v in token_vectors):
                raise MissingTagTokensError([phrase])
            vector = _mean_vector(token_vectors)
            self._tag_vectors[phrase] = vector
        return vector


class RemoteEmbeddingProvider:
    """Client for the contextual-embedding sidecar service.

    The service receives the full document token sequence and returns one
    vector per token (``POST {endpoint}/v1/embed``). Tag phrases are embedded
    with the phrase itself as context, since tags carry no surrounding
    document. The most recent context's vectors are cached so per-subsection
    calls over one document trigger a single request.
    """

    kind = "contextual-remote"

    def __init__(
        self,
        endpoint: str | None = None,
        model: str = "default",
        client: httpx.Client | None = None,
        timeout: float = 60.0,
    ):
        endpoint = endpoint or os.environ.get(ENDPOINT_ENV_VAR)
        if not endpoint:
            raise ProviderError(
                f"no endpoint given and {ENDPOINT_ENV_VAR} is not set"
            )
        self.endpoint = endpoint.rstrip("/")
        self.model = model
        self._client = client or httpx.Client(timeout=timeout)
        self._dim = self._health_check()
        self._context_cache: tuple[tuple[str, ...], list[np.ndarray]] | None = None
        self._tag_cache: dict[str, np.ndarray] = {}

    def _health_check(self) -> int:
        try:
            response = self._client.get(f"{self.endpoint}/v1/health")
        except httpx.HTTPError as exc:
            raise ProviderError(f"embedding service unreachable: {exc}") from exc
        if response.status_code != 200:
            raise ProviderError(
                f"embedding service not ready: HTTP {response.status_code}"
            )
        payload = response.json()
        dim = int(payload.get("dim", 0))
        if dim <= 0:
            raise ProviderError(f"embedding service reports invalid dim {dim!r}")
        return dim

    @property
    def dim(self) -> int:
        return self._dim

    def describe(self) -> ProviderDescriptor:
        return ProviderDescriptor(self.kind, self._dim, self.model)

    def _request_vectors(self, sequences: list[list[str]]) -> list[list[np.ndarray]]:
        request_id = uuid.uuid4().hex
        body = {"request_id": request_id, "model": self.model, "sequences": sequences}
        try:
            response = self._client.post(f"{self.endpoint}/v1/embed", json=body)
        except httpx.HTTPError as exc:
            raise ProviderError(f"embed request failed: {exc}") from exc
        if response.status_code != 200:
            raise ProviderError(
                f"embed request rejected: HTTP {response.status_code}: {response.text[:200]}"
            )
        payload = response.json()
        if payload.get("request_id") != request_id:
            raise ProviderError("response does not match request id")
        out: list[list[np.ndarray]] = []
        for sequence, rows in zip(sequences, payload["vectors"], strict=True):
            if len(rows) != len(sequence):
                raise ProviderError(
                    f"service returned {len(rows)} vectors for {len(sequence)} tokens"
                )
            vectors = [np.asarray(row, dtype=np.float64) for row in rows]
            for vector in vectors:
                if vector.shape != (self._dim,):
                    raise ProviderError(
                        f"service returned dimension {vector.shape}, expected ({self._dim},)"
                    )
            out.append(vectors)
        return out

    def embed_context(self, context: Sequence[str]) -> list[np.ndarray]:
        """Vectors for a full document sequence, cached for repeated slicing."""
        key = tuple(context)
        if self._context_cache is not None and self._context_cache[0] == key:
            return self._context_cache[1]
        if not key:
            return []
        vectors = self._request_vectors([list(key)])[0]
        self._context_cache = (key, vectors)
        return vectors

    def embed_tokens(
        self,
        tokens: Sequence[str],
        context: Sequence[str] | None = None,
        start: int | None = None,
    ) -> list[np.ndarray | None]:
        """Contextual vectors for a contiguous slice of ``context``.

        ``start`` pins the slice position; without it the first matching
        subsequence is used. Contextual lookups never report ABSENT.
        """
        tokens = list(tokens)
        if not tokens:
            return []
        if context is None:
            context = tokens
            start = 0
        context = list(context)
        if start is None:
            start = self._locate(tokens, context)
        if context[start : start + len(tokens)] != tokens:
            raise ProviderError("tokens are not a contiguous slice of context at start")
        vectors = self.embed_context(context)
        return list(vectors[start : start + len(tokens)])

    @staticmethod
    def _locate(tokens: list[str], context: list[str]) -> int:
        for i in range(len(context) - len(tokens) + 1):
            if context[i : i + len(tokens)] == tokens:
                return i
        raise ProviderError("tokens are not a contiguous slice of context")

    def embed_tag(self, phrase: str) -> np.ndarray:
        vector = self._tag_cache.get(phrase)
        if vector is None:
            tokens = default_pipeline().preprocess_tag(phrase)
            vectors = self._request_vectors([tokens])[0]
            vector = _mean_vector(vectors)
            self._tag_cache[phrase] = vector
        return vector
