"""Semantic similarity via greedy max-cosine token matching.

Recall averages, over reference tokens, the best cosine similarity against
any generated token; precision mirrors it from the generated side; F1 is
the harmonic mean. Embeddings come from a pluggable provider. The reference
provider hashes padded character trigrams into a fixed 64-dimensional space
with a stable digest, so scores are identical across processes and runs
without any model download.
"""

from __future__ import annotations

import hashlib
import math

from ..errors import ContractError, UndefinedInputError
from .rouge import ScoreTriple
from .text import TokenSequence

Vector = tuple[float, ...]


class EmbeddingProvider:
    dimension: int

    def embed(self, tokens: TokenSequence) -> list[Vector]:
        """One vector per token; vectors must have nonzero magnitude."""
        raise NotImplementedError


class HashedTrigramEmbedding(EmbeddingProvider):
    """Deterministic reference provider: unit-normalized counts of hashed
    character trigrams of ^token$."""

    def __init__(self, dimension: int = 64):
        self.dimension = dimension
        self._token_cache: dict[str, Vector] = {}

    def embed(self, tokens: TokenSequence) -> list[Vector]:
        return [self._embed_token(t) for t in tokens]

    def buckets(self, token: str) -> set[int]:
        padded = f"^{token}$"
        grams = [padded[i : i + 3] for i in range(max(1, len(padded) - 2))]
        return {self._bucket(g) for g in grams}

    def _embed_token(self, token: str) -> Vector:
        cached = self._token_cache.get(token)
        if cached is not None:
            return cached
        counts = [0.0] * self.dimension
        padded = f"^{token}$"
        for i in range(max(1, len(padded) - 2)):
            counts[self._bucket(padded[i : i + 3])] += 1.0
        norm = math.sqrt(sum(c * c for c in counts))
        vector = tuple(c / norm for c in counts)
        self._token_cache[token] = vector
        return vector

    def _bucket(self, gram: str) -> int:
        digest = hashlib.blake2b(gram.encode("utf-8"), digest_size=8).digest()
        return int.from_bytes(digest, "big") % self.dimension


def cosine(u: Vector, v: Vector) -> float:
    nu = math.sqrt(sum(x * x for x in u))
    nv = math.sqrt(sum(x * x for x in v))
    if nu == 0.0 or nv == 0.0:
        raise ContractError("embedding provider produced a zero-magnitude vector")
    return sum(x * y for x, y in zip(u, v)) / (nu * nv)


def semantic_score(
    reference: TokenSequence, generated: TokenSequence, provider: EmbeddingProvider
) -> ScoreTriple:
    if not reference or not generated:
        raise UndefinedInputError("semantic score needs nonempty token sequences")
    ref_vectors = provider.embed(reference)
    gen_vectors = provider.embed(generated)
    recall = sum(max(cosine(r, g) for g in gen_vectors) for r in ref_vectors) / len(ref_vectors)
    precision = sum(max(cosine(g, r) for r in ref_vectors) for g in gen_vectors) / len(gen_vectors)
    return ScoreTriple.from_rates(recall, precision)
