from .corpus import (
    COMPONENTS,
    METRICS,
    BoxStats,
    CorpusStats,
    PairError,
    evaluate_corpus,
    evaluate_pair,
    quantile,
)
from .rouge import ScoreTriple, lcs_length, rouge_l, rouge_n
from .semantic import (
    EmbeddingProvider,
    HashedTrigramEmbedding,
    cosine,
    semantic_score,
)
from .text import TokenSequence, tokenize

__all__ = [
    "BoxStats",
    "COMPONENTS",
    "CorpusStats",
    "EmbeddingProvider",
    "HashedTrigramEmbedding",
    "METRICS",
    "PairError",
    "ScoreTriple",
    "TokenSequence",
    "cosine",
    "evaluate_corpus",
    "evaluate_pair",
    "lcs_length",
    "quantile",
    "rouge_l",
    "rouge_n",
    "semantic_score",
    "tokenize",
]
