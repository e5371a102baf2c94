"""Text embedding providers.

The default provider is fully offline and deterministic: lowercase
alphanumeric tokens are hashed (md5, so independent of interpreter hash
randomization) into a fixed number of buckets and the count vector is
L2-normalized. A remote provider with the same contract can be swapped in
through configuration; its wire format is a JSON POST of
``{"input": <text>}`` answered by ``{"embedding": [numbers]}``.
"""

from __future__ import annotations

import hashlib
import json
import re
import urllib.error
import urllib.request
from dataclasses import dataclass

import numpy as np

from transmigrate.errors import RetryableBackendError

DEFAULT_DIMENSION = 256

_TOKEN_RE = re.compile(r"[a-z0-9]+")


@dataclass(frozen=True)
class EmbeddingVector:
    values: np.ndarray  # unit norm for non-empty input text

    @property
    def dimension(self) -> int:
        return int(self.values.shape[0])

    def dot(self, other: "EmbeddingVector") -> float:
        return float(np.dot(self.values, other.values))


def _bucket(token: str, dimension: int) -> int:
    digest = hashlib.md5(token.encode("utf-8")).hexdigest()
    return int(digest[:8], 16) % dimension


class HashedTokenEmbedder:
    """Offline bag-of-tokens embedder; bitwise deterministic."""

    def __init__(self, dimension: int = DEFAULT_DIMENSION) -> None:
        if dimension <= 0:
            raise ValueError("embedding dimension must be positive")
        self.dimension = dimension
        self.call_count = 0

    def embed(self, text: str) -> EmbeddingVector:
        self.call_count += 1
        tokens = _TOKEN_RE.findall(text.lower())
        if not tokens and text:
            # No alphanumeric content: hash the raw text so non-empty input
            # still gets a unit vector.
            tokens = [text.lower()]
        counts = np.zeros(self.dimension, dtype=np.float64)
        for token in tokens:
            counts[_bucket(token, self.dimension)] += 1.0
        norm = float(np.linalg.norm(counts))
        if norm == 0.0:
            return EmbeddingVector(counts)
        return EmbeddingVector(counts / norm)


class RemoteEmbedder:
    """HTTP embedding provider behind the same contract as the offline one.

    Responses are re-normalized so the unit-norm invariant holds regardless
    of the remote service's conventions.
    """

    def __init__(self, endpoint: str, dimension: int, timeout: float = 30.0) -> None:
        self.endpoint = endpoint
        self.dimension = dimension
        self.timeout = timeout
        self.call_count = 0

    def embed(self, text: str) -> EmbeddingVector:
        self.call_count += 1
        body = json.dumps({"input": text}).encode("utf-8")
        req = urllib.request.Request(
            self.endpoint, data=body, headers={"Content-Type": "application/json"}
        )
        try:
            with urllib.request.urlopen(req, timeout=self.timeout) as resp:
                payload = json.loads(resp.read().decode("utf-8"))
        except (urllib.error.URLError, OSError, ValueError) as exc:
            raise RetryableBackendError(f"embedding provider failed: {exc}") from exc
        values = np.asarray(payload["embedding"], dtype=np.float64)
        norm = float(np.linalg.norm(values))
        if norm > 0.0:
            values = values / norm
        return EmbeddingVector(values)
