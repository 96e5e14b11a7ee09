"""Tokenization for the evaluation metrics.

Lowercase, Unicode-aware split on runs of non-alphanumeric characters;
underscores separate tokens too. Deterministic by construction.
"""

from __future__ import annotations

import re

TokenSequence = tuple[str, ...]

_TOKEN = re.compile(r"[^\W_]+", re.UNICODE)


def tokenize(text: str) -> TokenSequence:
    return tuple(_TOKEN.findall(text.lower()))
