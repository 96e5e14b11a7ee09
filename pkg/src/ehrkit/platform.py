"""Composition root: wires identity, directory, audit, pipeline, records,
gateway primitives and the AI orchestrator into one deployable unit.

Service-to-service calls run on real machine-to-machine tokens minted from
registered client credentials, so AI reads and approval-driven writes pass
the same five security layers as any external request.
"""

from __future__ import annotations

import secrets as _secrets

from .ai.clients import ClassifierClient, DeterministicGenerator, GeneratorClient, ThresholdStubClassifier
from .ai.orchestrator import AiOrchestrator
from .audit.log import DEFAULT_RETENTION_SECONDS, AuditLog
from .clock import Clock, SystemClock
from .directory.models import DataAdditionRequest, DataAdditionType
from .directory.service import UserDirectory
from .errors import NotFoundError
from .gateway.cache import TtlCache
from .gateway.ratelimit import DEFAULT_IP_LIMIT, DEFAULT_USER_LIMIT, FixedWindowRateLimiter
from .identity.permissions import (
    SCOPE_AUDIT_READ,
    SCOPE_RECORD_READ,
    SCOPE_RECORD_WRITE,
    Role,
)
from .identity.provider import DEFAULT_AUDIENCE, IdentityProvider, ServiceCredential
from .identity.tokens import TokenCodec
from .ids import IdSource, random_ids
from .pipeline.pipeline import SecurityPipeline
from .records.service import PatientRecordService

AI_SERVICE_ID = "ai-service"
USER_SERVICE_ID = "user-service"


class Platform:
    def __init__(
        self,
        *,
        clock: Clock | None = None,
        ids: IdSource | None = None,
        signing_key: str | None = None,
        audience: str = DEFAULT_AUDIENCE,
        generator: GeneratorClient | None = None,
        classifier: ClassifierClient | None = None,
        ip_rate_limit: int = DEFAULT_IP_LIMIT,
        user_rate_limit: int = DEFAULT_USER_LIMIT,
        retention_seconds: int = DEFAULT_RETENTION_SECONDS,
        cache_ttls: dict[str, float] | None = None,
        pipeline_observer=None,
    ):
        self.clock = clock or SystemClock()
        self.ids = ids or random_ids()
        self.audience = audience

        codec = TokenCodec(signing_key or _secrets.token_hex(32))
        self.directory = UserDirectory(self.clock, self.ids)
        self.identity = IdentityProvider(
            codec, self.clock, audience=audience, principal_exists=self.directory.principal_exists
        )
        self.audit = AuditLog(self.clock, retention_seconds=retention_seconds)
        self.pipeline = SecurityPipeline(
            self.identity,
            self.audit,
            admission_active=self.directory.admission_active,
            observer=pipeline_observer,
        )
        self.records = PatientRecordService(
            self.pipeline,
            self.clock,
            ids=self.ids,
            patient_exists=lambda pid: self.directory.principal_exists(pid, Role.PATIENT),
            doctor_name=self._doctor_name,
        )
        self.cache = TtlCache(self.clock, cache_ttls)
        self.records.add_mutation_listener(self.cache.invalidate_patient)
        self.ratelimiter = FixedWindowRateLimiter(ip_rate_limit, user_rate_limit)

        self._ai_secret = _secrets.token_hex(16)
        self._user_service_secret = _secrets.token_hex(16)
        self.identity.register_service(
            ServiceCredential(
                AI_SERVICE_ID,
                self._ai_secret,
                frozenset({SCOPE_RECORD_READ, SCOPE_RECORD_WRITE}),
            )
        )
        self.identity.register_service(
            ServiceCredential(
                USER_SERVICE_ID,
                self._user_service_secret,
                frozenset({SCOPE_RECORD_READ, SCOPE_RECORD_WRITE, SCOPE_AUDIT_READ}),
            )
        )

        self.ai = AiOrchestrator(
            generator=generator or DeterministicGenerator(),
            classifier=classifier or ThresholdStubClassifier(),
            records=self.records,
            clock=self.clock,
            service_token=self.ai_service_token,
            admission_active=self.directory.admission_active,
            patient_profile=self._patient_profile,
            cache=self.cache,
            ids=self.ids,
        )
        self.directory.set_approval_hook(self._insert_approved_entity)

    # -- machine-to-machine tokens -----------------------------------------

    def ai_service_token(self) -> str:
        return self.identity.issue_service_token(
            AI_SERVICE_ID, self._ai_secret, {SCOPE_RECORD_READ}
        )

    def user_service_token(self) -> str:
        return self.identity.issue_service_token(
            USER_SERVICE_ID, self._user_service_secret, {SCOPE_RECORD_READ, SCOPE_RECORD_WRITE}
        )

    # -- directory hooks ------------------------------------------------------

    def _doctor_name(self, doctor_id: str) -> str:
        try:
            return self.directory.get_doctor(doctor_id).name
        except NotFoundError:
            return doctor_id

    def _patient_profile(self, patient_id: str) -> dict:
        try:
            profile = self.directory.get_patient(patient_id)
            return {"name": profile.name, "contact": profile.contact}
        except NotFoundError:
            return {"name": patient_id, "contact": ""}

    def _insert_approved_entity(
        self, request: DataAdditionRequest, doctor_id: str, entity_payload: dict | None
    ) -> None:
        """Approved data additions materialize as record entities, inserted
        through the machine-to-machine path and attributed to the approving
        doctor in the payload notes."""
        token = self.user_service_token()
        patient_id = request.patient_id
        if not self.records.has_record(patient_id):
            self.records.create_record(token, patient_id)
        provenance = f"approved by {doctor_id} from request {request.request_id}"
        if request.data_type == DataAdditionType.DIAGNOSIS:
            payload = {
                "name": f"reported diagnosis ({request.document_ref})",
                "chronic": False,
                "notes": provenance,
            }
            payload.update(entity_payload or {})
            self.records.upsert_entity(token, patient_id, "condition", payload)
        elif request.data_type == DataAdditionType.SURGERY:
            payload = {
                "name": f"reported surgery ({request.document_ref})",
                "date": request.issuance_date,
                "outcome": provenance,
            }
            payload.update(entity_payload or {})
            self.records.upsert_entity(token, patient_id, "surgery", payload)
        else:
            # test_result, report, prescription: attach the document to the
            # most recent visit; with no visit the approval alone is recorded
            # and the request keeps the document reference.
            resolved = self.records.resolve_unchecked(patient_id)
            if not resolved.visits:
                return
            newest = resolved.visits[0]
            kind = "lab_result" if request.data_type == DataAdditionType.TEST_RESULT else "report"
            attachments = list(newest.attachments)
            attachments.append({"kind": kind, "storage_ref": request.document_ref})
            self.records.update_visit(
                token, patient_id, newest.visit_id, {"attachments": attachments}
            )
