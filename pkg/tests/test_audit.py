from __future__ import annotations

import dataclasses
import json

import pytest

from ehrkit.audit.log import DEFAULT_RETENTION_SECONDS, AuditLog
from ehrkit.clock import ManualClock
from ehrkit.errors import ForbiddenError, ValidationFailure
from ehrkit.identity.permissions import Role
from ehrkit.identity.tokens import GRANT_CLIENT_CREDENTIALS, GRANT_PASSWORD, PrincipalClaims

YEAR = 365 * 24 * 3600


def _claims(role: Role, subject: str = "p", scopes: frozenset[str] = frozenset()) -> PrincipalClaims:
    return PrincipalClaims(
        subject=subject,
        roles=frozenset({role}),
        permissions=frozenset(),
        audiences=("ehr-api",),
        issued_at=0,
        expires_at=2_000_000_000,
        scopes=scopes,
        grant_type=GRANT_CLIENT_CREDENTIALS if role == Role.SERVICE else GRANT_PASSWORD,
    )


ADMIN = _claims(Role.ADMIN, "admin-1")
DOCTOR = _claims(Role.DOCTOR, "doctor-1")
AUDIT_SERVICE = _claims(Role.SERVICE, "monitor", frozenset({"audit:read"}))


@pytest.fixture
def log():
    return AuditLog(ManualClock(1_700_000_000.0))


def _view(log: AuditLog, actor: str = "doctor-1", document: str = "rec-1") -> str:
    return log.append(
        collection_name="medical_records",
        document_id=document,
        action="VIEW",
        actor_id=actor,
        ip_address="10.0.0.9",
        user_agent="test-agent",
        reason="Medical Record Viewed",
        status="Success",
    )


class TestAppend:
    def test_view_entry_has_the_full_document_shape(self, log):
        _view(log)
        entry = log.query(ADMIN)[0]
        doc = entry.to_document()
        expected_fields = {
            "collection_name",
            "document_id",
            "action",
            "actor_id",
            "ip_address",
            "user_agent",
            "reason",
            "access_type",
            "status",
            "created_at",
            "updated_at",
            "version",
        }
        assert expected_fields <= set(doc)
        assert doc["action"] == "VIEW"
        assert doc["reason"] == "Medical Record Viewed"
        assert doc["access_type"] == "Regular"
        assert doc["version"] == 0
        assert doc["created_at"] == doc["updated_at"]

    def test_unknown_action_is_rejected(self, log):
        with pytest.raises(ValidationFailure):
            log.append(
                collection_name="medical_records",
                document_id="rec-1",
                action="PURGE",
                actor_id="doctor-1",
                ip_address="10.0.0.9",
                user_agent="t",
                reason="nope",
                status="Success",
            )

    def test_sequence_position_strictly_increases(self, log):
        _view(log)
        _view(log)
        entries = log.query(ADMIN)
        assert entries[1].sequence > entries[0].sequence


class TestQuery:
    def test_actor_filter_matches_brute_force(self, log):
        for actor in ("doctor-1", "doctor-2", "doctor-1", "admin-1", "doctor-1"):
            _view(log, actor=actor)
        full_stream = log.query(ADMIN, page_size=1000)
        oracle = [e for e in full_stream if e.actor_id == "doctor-1"]
        assert log.query(ADMIN, actor_id="doctor-1", page_size=1000) == oracle

    def test_empty_time_range_is_empty(self, log):
        _view(log)
        assert log.query(ADMIN, time_range=(0.0, 0.0)) == []

    def test_doctor_cannot_query(self, log):
        _view(log)
        with pytest.raises(ForbiddenError):
            log.query(DOCTOR)

    def test_service_with_audit_read_scope_can_query(self, log):
        _view(log)
        assert len(log.query(AUDIT_SERVICE)) == 1

    def test_pagination_is_stable(self, log):
        for i in range(25):
            _view(log, document=f"rec-{i}")
        page0 = log.query(ADMIN, page=0, page_size=10)
        page1 = log.query(ADMIN, page=1, page_size=10)
        assert [e.sequence for e in page0] == list(range(10))
        assert [e.sequence for e in page1] == list(range(10, 20))


class TestRetention:
    def test_boundary_classification(self):
        clock = ManualClock(0.0)
        log = AuditLog(clock)
        _view(log)  # created at t=0
        # 4 years old: retained.
        assert log.retention_check(4 * YEAR) == []
        # Exactly the horizon: still retained ("minimum of five years").
        assert log.retention_check(DEFAULT_RETENTION_SECONDS) == []
        # One second past the horizon: eligible.
        assert len(log.retention_check(DEFAULT_RETENTION_SECONDS + 1)) == 1
        # 6 years old: eligible.
        assert len(log.retention_check(6 * YEAR)) == 1

    def test_empty_log(self, log):
        assert log.retention_check(1e12) == []

    def test_retention_check_never_deletes(self, log):
        _view(log)
        log.retention_check(1e12)
        assert len(log) == 1


class TestImmutability:
    def test_entries_are_frozen(self, log):
        _view(log)
        entry = log.query(ADMIN)[0]
        with pytest.raises(dataclasses.FrozenInstanceError):
            entry.status = "Failure"

    def test_no_exposed_delete_or_update(self, log):
        public = {name for name in dir(log) if not name.startswith("_")}
        assert not any(
            verb in name.lower() for name in public for verb in ("delete", "remove", "update", "clear", "pop")
        )

    def test_digest_invariant_under_reads(self, log):
        for i in range(10):
            _view(log, document=f"rec-{i}")
        before = log.stream_digest()
        log.query(ADMIN, actor_id="doctor-1")
        log.retention_check(1e12)
        log.export_ndjson()
        returned = log.query(ADMIN, page_size=5)
        returned.clear()  # mutating the returned list must not touch the stream
        assert log.stream_digest() == before
        assert len(log) == 10

    def test_export_is_one_document_per_line(self, log):
        _view(log)
        _view(log)
        lines = log.export_ndjson().splitlines()
        assert len(lines) == 2
        for line in lines:
            assert json.loads(line)["collection_name"] == "medical_records"
