"""N-gram and longest-common-subsequence overlap scores.

For n-grams, matched counts use multiset clipping: each distinct n-gram
contributes min(reference occurrences, generated occurrences). Recall
divides by the reference n-gram count, precision by the generated count,
and F1 is the harmonic mean, defined as 0 when precision + recall is 0.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import UndefinedInputError
from .text import TokenSequence


@dataclass(frozen=True)
class ScoreTriple:
    recall: float
    precision: float
    f1: float

    @staticmethod
    def from_rates(recall: float, precision: float) -> "ScoreTriple":
        if precision + recall > 0:
            f1 = 2.0 * precision * recall / (precision + recall)
        else:
            f1 = 0.0
        return ScoreTriple(recall=recall, precision=precision, f1=f1)


def _ngram_counts(tokens: TokenSequence, n: int) -> dict[tuple[str, ...], int]:
    counts: dict[tuple[str, ...], int] = {}
    for i in range(len(tokens) - n + 1):
        gram = tokens[i : i + n]
        counts[gram] = counts.get(gram, 0) + 1
    return counts


def rouge_n(reference: TokenSequence, generated: TokenSequence, n: int) -> ScoreTriple:
    if n not in (1, 2):
        raise UndefinedInputError(f"n must be 1 or 2, got {n}")
    ref_total = len(reference) - n + 1
    if ref_total <= 0:
        raise UndefinedInputError(f"reference has no {n}-grams")
    gen_total = len(generated) - n + 1
    if gen_total <= 0:
        return ScoreTriple.from_rates(0.0, 0.0)
    ref_counts = _ngram_counts(reference, n)
    gen_counts = _ngram_counts(generated, n)
    matched = 0
    for gram, count in ref_counts.items():
        other = gen_counts.get(gram)
        if other is not None:
            matched += count if count < other else other
    return ScoreTriple.from_rates(matched / ref_total, matched / gen_total)


def lcs_length(a: TokenSequence, b: TokenSequence) -> int:
    if not a or not b:
        return 0
    if len(b) > len(a):
        a, b = b, a
    previous = [0] * (len(b) + 1)
    for x in a:
        current = [0]
        row_prev = previous
        for j, y in enumerate(b):
            if x == y:
                current.append(row_prev[j] + 1)
            else:
                up = row_prev[j + 1]
                left = current[j]
                current.append(up if up >= left else left)
        previous = current
    return previous[-1]


def rouge_l(reference: TokenSequence, generated: TokenSequence) -> ScoreTriple:
    if not reference:
        raise UndefinedInputError("reference is empty")
    lcs = lcs_length(reference, generated)
    recall = lcs / len(reference)
    precision = lcs / len(generated) if generated else 0.0
    return ScoreTriple.from_rates(recall, precision)
