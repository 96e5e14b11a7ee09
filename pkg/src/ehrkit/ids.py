"""Id generation, injectable so fixtures and golden tests are reproducible."""

from __future__ import annotations

import itertools
import uuid
from typing import Callable, Iterator

IdSource = Callable[[str], str]


def random_ids() -> IdSource:
    def make(kind: str) -> str:
        return f"{kind}-{uuid.uuid4().hex[:12]}"

    return make


def sequential_ids() -> IdSource:
    """Deterministic per-kind counters: patient-0001, visit-0002, ..."""
    counters: dict[str, Iterator[int]] = {}

    def make(kind: str) -> str:
        counter = counters.setdefault(kind, itertools.count(1))
        return f"{kind}-{next(counter):04d}"

    return make
