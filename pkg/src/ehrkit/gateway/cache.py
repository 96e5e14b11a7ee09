"""Namespaced TTL cache fronting sessions, hot queries and AI outputs.

Keys must carry one of the known namespaces. Entries are never served at or
past ``inserted_at + ttl``. Record mutations invalidate the patient's AI
summary and hot-query keys so a stale clinical summary can never be served.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

from ..clock import Clock

NAMESPACES = ("session:", "query:", "ai:")

DEFAULT_TTLS = {
    "session:": 1800.0,
    "query:": 60.0,
    "ai:": 300.0,
}


@dataclass
class CacheEntry:
    key: str
    value: bytes
    ttl: float
    inserted_at: float


class TtlCache:
    def __init__(self, clock: Clock, default_ttls: dict[str, float] | None = None):
        self._clock = clock
        self._default_ttls = dict(DEFAULT_TTLS if default_ttls is None else default_ttls)
        self._entries: dict[str, CacheEntry] = {}
        self._lock = threading.Lock()

    def default_ttl(self, key: str) -> float:
        return self._default_ttls[_namespace_of(key)]

    def put(self, key: str, value: bytes, ttl: float | None = None) -> None:
        ttl = self.default_ttl(key) if ttl is None else float(ttl)
        with self._lock:
            self._entries[key] = CacheEntry(key, bytes(value), ttl, self._clock.now())

    def get(self, key: str) -> bytes | None:
        _namespace_of(key)
        with self._lock:
            entry = self._entries.get(key)
            if entry is None:
                return None
            if self._clock.now() >= entry.inserted_at + entry.ttl:
                del self._entries[key]
                return None
            return entry.value

    def delete(self, key: str) -> None:
        with self._lock:
            self._entries.pop(key, None)

    def delete_prefix(self, prefix: str) -> int:
        with self._lock:
            stale = [k for k in self._entries if k.startswith(prefix)]
            for key in stale:
                del self._entries[key]
        return len(stale)

    def invalidate_patient(self, patient_id: str) -> None:
        """Write-through invalidation published on every record mutation."""
        self.delete(f"ai:sum:{patient_id}")
        self.delete_prefix(f"query:{patient_id}:")

    def __len__(self) -> int:
        return len(self._entries)


def _namespace_of(key: str) -> str:
    for ns in NAMESPACES:
        if key.startswith(ns):
            return ns
    raise ValueError(f"cache key {key!r} lacks a known namespace {NAMESPACES}")
