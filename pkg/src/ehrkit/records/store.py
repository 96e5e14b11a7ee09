"""Storage contracts for clinical data.

The record service talks to a document store (per-document atomic writes,
entities in their own collections) and a blob store for attachment bytes.
The in-memory implementations back tests and the reference deployment; any
engine honoring the same interface can replace them.
"""

from __future__ import annotations

import copy
import threading

from ..errors import NotFoundError


class DocumentStore:
    def put(self, collection: str, doc_id: str, document: dict) -> None:
        raise NotImplementedError

    def get(self, collection: str, doc_id: str) -> dict | None:
        raise NotImplementedError

    def delete(self, collection: str, doc_id: str) -> None:
        raise NotImplementedError

    def list(self, collection: str) -> list[dict]:
        raise NotImplementedError


class InMemoryDocumentStore(DocumentStore):
    """Dict-of-dicts store; every read returns a deep copy so callers can
    never mutate stored state in place."""

    def __init__(self):
        self._collections: dict[str, dict[str, dict]] = {}
        self._lock = threading.Lock()

    def put(self, collection: str, doc_id: str, document: dict) -> None:
        with self._lock:
            self._collections.setdefault(collection, {})[doc_id] = copy.deepcopy(document)

    def get(self, collection: str, doc_id: str) -> dict | None:
        with self._lock:
            doc = self._collections.get(collection, {}).get(doc_id)
            return copy.deepcopy(doc) if doc is not None else None

    def delete(self, collection: str, doc_id: str) -> None:
        with self._lock:
            self._collections.get(collection, {}).pop(doc_id, None)

    def list(self, collection: str) -> list[dict]:
        with self._lock:
            return [copy.deepcopy(d) for d in self._collections.get(collection, {}).values()]


class BlobStore:
    def put(self, ref: str, data: bytes) -> str:
        raise NotImplementedError

    def get(self, ref: str) -> bytes:
        raise NotImplementedError


class InMemoryBlobStore(BlobStore):
    def __init__(self):
        self._blobs: dict[str, bytes] = {}
        self._lock = threading.Lock()

    def put(self, ref: str, data: bytes) -> str:
        with self._lock:
            self._blobs[ref] = bytes(data)
        return ref

    def get(self, ref: str) -> bytes:
        with self._lock:
            try:
                return self._blobs[ref]
            except KeyError:
                raise NotFoundError(f"blob {ref} not found") from None
