"""Append-only audit trail.

Entries are frozen dataclasses held behind a single append serialization
point that assigns a strictly increasing sequence number. There is no
update or delete operation anywhere on the public surface: retention checks
only *report* entries old enough to archive.
"""

from __future__ import annotations

import hashlib
import json
import threading
from dataclasses import asdict, dataclass, field

from ..clock import Clock, iso_utc
from ..errors import ForbiddenError, ValidationFailure
from ..identity.permissions import SCOPE_AUDIT_READ, Role
from ..identity.tokens import PrincipalClaims

ACTIONS = ("VIEW", "CREATE", "UPDATE", "DELETE")
ACCESS_TYPES = ("Regular", "Emergency")
STATUSES = ("Success", "Failure")

# Five years, the minimum retention horizon.
DEFAULT_RETENTION_SECONDS = 5 * 365 * 24 * 3600


@dataclass(frozen=True)
class AuditEntry:
    entry_id: str
    sequence: int
    collection_name: str
    document_id: str
    action: str
    actor_id: str
    ip_address: str
    user_agent: str
    reason: str
    access_type: str
    status: str
    created_at: float
    updated_at: float
    version: int = 0

    def to_document(self) -> dict:
        doc = asdict(self)
        doc["created_at"] = iso_utc(self.created_at)
        doc["updated_at"] = iso_utc(self.updated_at)
        return doc


class AuditLog:
    def __init__(self, clock: Clock, retention_seconds: int = DEFAULT_RETENTION_SECONDS):
        self._clock = clock
        self._retention_seconds = retention_seconds
        self._entries: list[AuditEntry] = []
        self._append_lock = threading.Lock()

    def append(
        self,
        *,
        collection_name: str,
        document_id: str,
        action: str,
        actor_id: str,
        ip_address: str,
        user_agent: str,
        reason: str,
        status: str,
        access_type: str = "Regular",
        at: float | None = None,
    ) -> str:
        if action not in ACTIONS:
            raise ValidationFailure(f"action: unknown value {action!r}")
        if status not in STATUSES:
            raise ValidationFailure(f"status: unknown value {status!r}")
        if access_type not in ACCESS_TYPES:
            raise ValidationFailure(f"access_type: unknown value {access_type!r}")
        now = self._clock.now() if at is None else at
        with self._append_lock:
            sequence = len(self._entries)
            entry = AuditEntry(
                entry_id=f"audit-{sequence:08d}",
                sequence=sequence,
                collection_name=collection_name,
                document_id=document_id,
                action=action,
                actor_id=actor_id,
                ip_address=ip_address,
                user_agent=user_agent,
                reason=reason,
                access_type=access_type,
                status=status,
                created_at=now,
                updated_at=now,
            )
            self._entries.append(entry)
        return entry.entry_id

    def query(
        self,
        claims: PrincipalClaims,
        *,
        actor_id: str | None = None,
        document_id: str | None = None,
        action: str | None = None,
        time_range: tuple[float, float] | None = None,
        page: int = 0,
        page_size: int = 100,
    ) -> list[AuditEntry]:
        """Filtered, sequence-ordered, stably paginated view of the stream.

        Admins and service principals holding the audit read scope only.
        """
        allowed = claims.has_role(Role.ADMIN) or (
            claims.is_service and SCOPE_AUDIT_READ in claims.scopes
        )
        if not allowed:
            raise ForbiddenError("audit queries require an admin or an audit-read scope")
        snapshot = self._snapshot()
        selected = [
            e
            for e in snapshot
            if (actor_id is None or e.actor_id == actor_id)
            and (document_id is None or e.document_id == document_id)
            and (action is None or e.action == action)
            and (time_range is None or time_range[0] <= e.created_at < time_range[1])
        ]
        start = page * page_size
        return selected[start : start + page_size]

    def retention_check(self, now: float) -> list[AuditEntry]:
        """Entries strictly older than the retention horizon: eligible for
        archival, advisory only. Nothing is removed."""
        horizon = now - self._retention_seconds
        return [e for e in self._snapshot() if e.created_at < horizon]

    def export_ndjson(self) -> str:
        """One structured document per line, stream order."""
        return "\n".join(json.dumps(e.to_document(), sort_keys=True) for e in self._snapshot())

    def stream_digest(self) -> str:
        """Tamper-evidence hash over the whole stream."""
        h = hashlib.sha256()
        for entry in self._snapshot():
            h.update(json.dumps(entry.to_document(), sort_keys=True).encode("utf-8"))
            h.update(b"\n")
        return h.hexdigest()

    def __len__(self) -> int:
        return len(self._entries)

    def _snapshot(self) -> list[AuditEntry]:
        with self._append_lock:
            return list(self._entries)
