"""Corpus-level evaluation: every metric on every pair, plus box-plot
distribution statistics (median, quartiles, IQR, whisker-rule outliers).

Pairs are independent, so evaluation could run in parallel; results merge in
input order either way, keeping the output deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..errors import UndefinedInputError
from .rouge import ScoreTriple, rouge_l, rouge_n
from .semantic import EmbeddingProvider, HashedTrigramEmbedding, semantic_score
from .text import tokenize

METRICS = ("rouge1", "rouge2", "rougeL", "semantic")
COMPONENTS = ("recall", "precision", "f1")


@dataclass(frozen=True)
class BoxStats:
    median: float
    q1: float
    q3: float
    iqr: float
    outliers: tuple[tuple[int, float], ...]  # (pair index, value)


@dataclass(frozen=True)
class PairError:
    index: int
    metric: str
    message: str


@dataclass
class CorpusStats:
    pair_count: int
    scores: dict[str, list[ScoreTriple | None]]  # per metric, None where errored
    stats: dict[str, dict[str, BoxStats]]  # metric -> component -> box stats
    errors: list[PairError] = field(default_factory=list)

    def excluded_count(self, metric: str) -> int:
        return sum(1 for s in self.scores[metric] if s is None)

    def to_document(self) -> dict:
        return {
            "pair_count": self.pair_count,
            "metrics": {
                metric: {
                    "excluded": self.excluded_count(metric),
                    "components": {
                        component: {
                            "median": box.median,
                            "q1": box.q1,
                            "q3": box.q3,
                            "iqr": box.iqr,
                            "outliers": [
                                {"pair": i, "value": v} for i, v in box.outliers
                            ],
                        }
                        for component, box in self.stats[metric].items()
                    },
                }
                for metric in METRICS
            },
            "errors": [
                {"pair": e.index, "metric": e.metric, "message": e.message}
                for e in self.errors
            ],
        }


def evaluate_pair(
    reference_text: str, generated_text: str, provider: EmbeddingProvider
) -> dict[str, ScoreTriple]:
    reference = tokenize(reference_text)
    generated = tokenize(generated_text)
    return {
        "rouge1": rouge_n(reference, generated, 1),
        "rouge2": rouge_n(reference, generated, 2),
        "rougeL": rouge_l(reference, generated),
        "semantic": semantic_score(reference, generated, provider),
    }


def evaluate_corpus(
    pairs: list[tuple[str, str]],
    provider: EmbeddingProvider | None = None,
    metrics: tuple[str, ...] = METRICS,
) -> CorpusStats:
    if not pairs:
        raise UndefinedInputError("corpus is empty")
    provider = provider or HashedTrigramEmbedding()
    scorers = {
        "rouge1": lambda r, g: rouge_n(r, g, 1),
        "rouge2": lambda r, g: rouge_n(r, g, 2),
        "rougeL": rouge_l,
        "semantic": lambda r, g: semantic_score(r, g, provider),
    }
    scores: dict[str, list[ScoreTriple | None]] = {m: [] for m in METRICS}
    errors: list[PairError] = []
    for index, (reference_text, generated_text) in enumerate(pairs):
        reference = tokenize(reference_text)
        generated = tokenize(generated_text)
        for metric in METRICS:
            if metric not in metrics:
                scores[metric].append(None)
                continue
            try:
                scores[metric].append(scorers[metric](reference, generated))
            except UndefinedInputError as exc:
                scores[metric].append(None)
                errors.append(PairError(index, metric, exc.detail))
    stats = {
        metric: {
            component: _box_stats(
                [
                    (i, getattr(triple, component))
                    for i, triple in enumerate(scores[metric])
                    if triple is not None
                ]
            )
            for component in COMPONENTS
        }
        for metric in METRICS
        if metric in metrics
    }
    return CorpusStats(pair_count=len(pairs), scores=scores, stats=stats, errors=errors)


def quantile(sorted_values: list[float], q: float) -> float:
    """Linear interpolation between closest ranks on a sorted sample."""
    if not sorted_values:
        raise UndefinedInputError("quantile of an empty sample")
    n = len(sorted_values)
    if n == 1:
        return sorted_values[0]
    position = q * (n - 1)
    lower = math.floor(position)
    upper = math.ceil(position)
    fraction = position - lower
    return sorted_values[lower] * (1.0 - fraction) + sorted_values[upper] * fraction


def _box_stats(indexed_values: list[tuple[int, float]]) -> BoxStats:
    if not indexed_values:
        return BoxStats(math.nan, math.nan, math.nan, math.nan, ())
    ordered = sorted(v for _, v in indexed_values)
    q1 = quantile(ordered, 0.25)
    median = quantile(ordered, 0.5)
    q3 = quantile(ordered, 0.75)
    iqr = q3 - q1
    low, high = q1 - 1.5 * iqr, q3 + 1.5 * iqr
    outliers = tuple((i, v) for i, v in indexed_values if v < low or v > high)
    return BoxStats(median=median, q1=q1, q3=q3, iqr=iqr, outliers=outliers)
