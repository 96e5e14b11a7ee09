"""Patient record service.

Every public operation is processed through the security pipeline; the
handlers below only run once authentication, authorization, validation and
access control have all passed, and each processed request leaves exactly
one audit entry.

Writes to one record aggregate are serialized through a per-record lock so
concurrent entity upserts cannot lose list updates; every successful
mutation bumps the aggregate version and notifies mutation listeners (the
gateway cache uses this to drop stale AI outputs).
"""

from __future__ import annotations

import threading
from dataclasses import asdict
from datetime import date as _date
from typing import Callable

from ..clock import Clock
from ..errors import ConflictError, NotFoundError, ValidationFailure
from ..ids import IdSource, random_ids
from ..pipeline.pipeline import OperationSpec, RequestContext, SecurityPipeline
from .models import (
    Allergy,
    Condition,
    Immunization,
    Lifestyle,
    MedicalRecord,
    Medication,
    ResolvedRecord,
    Surgery,
    Visit,
)
from .store import BlobStore, DocumentStore, InMemoryBlobStore, InMemoryDocumentStore

RECORDS = "medical_records"
VISITS = "visits"

_ENTITY_TYPES = {
    "allergy": Allergy,
    "condition": Condition,
    "medication": Medication,
    "surgery": Surgery,
    "immunization": Immunization,
}
_ENTITY_COLLECTIONS = {
    "allergy": "allergies",
    "condition": "conditions",
    "medication": "medications",
    "surgery": "surgeries",
    "immunization": "immunizations",
}
_ENTITY_LIST_FIELDS = {
    "allergy": "allergy_ids",
    "condition": "condition_ids",
    "medication": "medication_ids",
    "surgery": "surgery_ids",
    "immunization": "immunization_ids",
}
_ENTITY_ID_FIELDS = {
    "allergy": "allergy_id",
    "condition": "condition_id",
    "medication": "medication_id",
    "surgery": "surgery_id",
    "immunization": "immunization_id",
}

ENTITY_KINDS = tuple(_ENTITY_TYPES) + ("lifestyle",)


def _op(name, permissions, action, collection, reason, scope) -> OperationSpec:
    return OperationSpec(
        name=name,
        required_permissions=permissions,
        schema_id=name,
        action=action,
        collection=collection,
        reason=reason,
        required_scope=scope,
    )


def _build_operations() -> dict[str, OperationSpec]:
    ops = {
        "create_record": _op(
            "create_record", ("createRecord",), "CREATE", RECORDS, "Medical Record Created", "record:write"
        ),
        "get_record": _op(
            "get_record", ("getRecord", "getOwnRecord"), "VIEW", RECORDS, "Medical Record Viewed", "record:read"
        ),
        "create_visit": _op(
            "create_visit", ("createVisit",), "CREATE", VISITS, "Visit Created", "record:write"
        ),
        "update_visit": _op(
            "update_visit", ("updateVisit",), "UPDATE", VISITS, "Visit Updated", "record:write"
        ),
        "list_visits": _op(
            "list_visits", ("getVisit", "getOwnRecord"), "VIEW", VISITS, "Visits Listed", "record:read"
        ),
    }
    for kind, collection in _ENTITY_COLLECTIONS.items():
        title = kind.capitalize()
        for mode, action in (("create", "CREATE"), ("update", "UPDATE"), ("delete", "DELETE")):
            name = f"{mode}_{kind}"
            ops[name] = _op(
                name, (f"{mode}{title}",), action, collection, f"{title} {action.title()}d", "record:write"
            )
    ops["update_lifestyle"] = _op(
        "update_lifestyle", ("updateLifestyle",), "UPDATE", RECORDS, "Lifestyle Updated", "record:write"
    )
    return ops


class PatientRecordService:
    def __init__(
        self,
        pipeline: SecurityPipeline,
        clock: Clock,
        *,
        store: DocumentStore | None = None,
        blobs: BlobStore | None = None,
        ids: IdSource | None = None,
        patient_exists: Callable[[str], bool] = lambda patient_id: True,
        doctor_name: Callable[[str], str] = lambda doctor_id: doctor_id,
    ):
        self._pipeline = pipeline
        self._clock = clock
        self._store = store or InMemoryDocumentStore()
        self.blobs = blobs or InMemoryBlobStore()
        self._ids = ids or random_ids()
        self._patient_exists = patient_exists
        self._doctor_name = doctor_name
        self._ops = _build_operations()
        self._records_by_patient: dict[str, str] = {}
        self._record_locks: dict[str, threading.Lock] = {}
        self._lock = threading.Lock()
        self._mutation_listeners: list[Callable[[str], None]] = []

    def add_mutation_listener(self, listener: Callable[[str], None]) -> None:
        self._mutation_listeners.append(listener)

    # -- public operations (token in, pipeline enforced) -----------------------

    def create_record(self, token: str, patient_id: str, **ctx_kw) -> MedicalRecord:
        ctx = self._ctx(token, "create_record", {}, patient_id, ctx_kw)

        def handler(c: RequestContext):
            if not self._patient_exists(patient_id):
                raise NotFoundError(f"patient {patient_id} not found")
            with self._lock:
                if patient_id in self._records_by_patient:
                    raise ConflictError(f"patient {patient_id} already has a medical record")
                record = MedicalRecord(
                    record_id=self._ids("record"),
                    patient_id=patient_id,
                    created_at=self._clock.now(),
                    updated_at=self._clock.now(),
                )
                self._records_by_patient[patient_id] = record.record_id
                self._record_locks[record.record_id] = threading.Lock()
            self._store.put(RECORDS, record.record_id, record.to_document())
            return record, record.record_id

        record = self._pipeline.process(ctx, self._ops["create_record"], handler)
        self._notify(patient_id)
        return record

    def get_record(self, token: str, patient_id: str, **ctx_kw) -> ResolvedRecord:
        ctx = self._ctx(token, "get_record", {}, patient_id, ctx_kw)

        def handler(c: RequestContext):
            record = self._load_record(patient_id)
            return self._resolve(record), record.record_id

        return self._pipeline.process(ctx, self._ops["get_record"], handler)

    def create_visit(self, token: str, patient_id: str, payload: dict, **ctx_kw) -> str:
        ctx = self._ctx(token, "create_visit", payload, patient_id, ctx_kw)

        def handler(c: RequestContext):
            visit_id = self._ids("visit")

            def apply(record: MedicalRecord) -> None:
                visit = Visit(
                    visit_id=visit_id,
                    record_id=record.record_id,
                    doctor_id=c.claims.subject,
                    examination_type=payload["examination_type"],
                    date=payload["date"],
                    complaints=payload["complaints"],
                    diagnosis=payload["diagnosis"],
                    symptoms=list(payload.get("symptoms", [])),
                    treatments=list(payload.get("treatments", [])),
                    notes=payload.get("notes", ""),
                    vitals=dict(payload.get("vitals", {})),
                    attachments=list(payload.get("attachments", [])),
                )
                self._store.put(VISITS, visit.visit_id, asdict(visit))
                record.visit_ids.append(visit.visit_id)

            self._mutate_record(patient_id, apply)
            return visit_id, visit_id

        visit_id = self._pipeline.process(ctx, self._ops["create_visit"], handler)
        self._notify(patient_id)
        return visit_id

    def update_visit(self, token: str, patient_id: str, visit_id: str, payload: dict, **ctx_kw) -> str:
        ctx = self._ctx(token, "update_visit", payload, patient_id, ctx_kw)

        def handler(c: RequestContext):
            def apply(record: MedicalRecord) -> None:
                if visit_id not in record.visit_ids:
                    raise NotFoundError(f"visit {visit_id} not found for this record")
                doc = self._store.get(VISITS, visit_id)
                doc.update(payload)
                self._store.put(VISITS, visit_id, doc)

            self._mutate_record(patient_id, apply)
            return visit_id, visit_id

        result = self._pipeline.process(ctx, self._ops["update_visit"], handler)
        self._notify(patient_id)
        return result

    def list_visits(self, token: str, patient_id: str, **ctx_kw) -> list[dict]:
        ctx = self._ctx(token, "list_visits", {}, patient_id, ctx_kw)

        def handler(c: RequestContext):
            record = self._load_record(patient_id)
            visits = [self._load_visit(v) for v in record.visit_ids]
            visits.sort(key=lambda v: (v.date, v.visit_id), reverse=True)
            summaries = [
                {
                    "visit_id": v.visit_id,
                    "examination_type": v.examination_type,
                    "date": v.date,
                    "doctor_name": self._doctor_name(v.doctor_id),
                }
                for v in visits
            ]
            return summaries, record.record_id

        return self._pipeline.process(ctx, self._ops["list_visits"], handler)

    def upsert_entity(
        self, token: str, patient_id: str, kind: str, payload: dict, entity_id: str | None = None, **ctx_kw
    ) -> str:
        if kind not in ENTITY_KINDS:
            raise ValidationFailure(f"kind: unknown entity kind {kind!r}")
        if kind == "lifestyle":
            return self._update_lifestyle(token, patient_id, payload, ctx_kw)
        mode = "update" if entity_id is not None else "create"
        op = self._ops[f"{mode}_{kind}"]
        ctx = self._ctx(token, op.name, payload, patient_id, ctx_kw)

        def handler(c: RequestContext):
            self._cross_field_checks(kind, payload)
            collection = _ENTITY_COLLECTIONS[kind]
            id_field = _ENTITY_ID_FIELDS[kind]
            list_field = _ENTITY_LIST_FIELDS[kind]
            result_id = entity_id if mode == "update" else self._ids(kind)

            def apply(record: MedicalRecord) -> None:
                if mode == "create":
                    entity = _ENTITY_TYPES[kind](
                        **{id_field: result_id, "record_id": record.record_id}, **payload
                    )
                    self._store.put(collection, result_id, asdict(entity))
                    getattr(record, list_field).append(result_id)
                else:
                    existing = self._store.get(collection, entity_id)
                    if existing is None or existing["record_id"] != record.record_id:
                        raise NotFoundError(f"{kind} {entity_id} not found")
                    existing.update(payload)
                    self._store.put(collection, entity_id, existing)

            self._mutate_record(patient_id, apply)
            return result_id, result_id

        result = self._pipeline.process(ctx, op, handler)
        self._notify(patient_id)
        return result

    def delete_entity(self, token: str, patient_id: str, kind: str, entity_id: str, **ctx_kw) -> None:
        if kind not in ENTITY_KINDS:
            raise ValidationFailure(f"kind: unknown entity kind {kind!r}")
        if kind == "lifestyle":
            raise ValidationFailure("lifestyle is a singleton and cannot be deleted")
        op = self._ops[f"delete_{kind}"]
        ctx = self._ctx(token, op.name, {}, patient_id, ctx_kw)

        def handler(c: RequestContext):
            collection = _ENTITY_COLLECTIONS[kind]
            list_field = _ENTITY_LIST_FIELDS[kind]

            def apply(record: MedicalRecord) -> None:
                existing = self._store.get(collection, entity_id)
                if existing is None or existing["record_id"] != record.record_id:
                    raise NotFoundError(f"{kind} {entity_id} not found")
                self._store.delete(collection, entity_id)
                getattr(record, list_field).remove(entity_id)

            self._mutate_record(patient_id, apply)
            return None, entity_id

        self._pipeline.process(ctx, op, handler)
        self._notify(patient_id)

    # -- unchecked helpers for sibling services --------------------------------

    def record_version(self, patient_id: str) -> int:
        return self._load_record(patient_id).version

    def resolve_unchecked(self, patient_id: str) -> ResolvedRecord:
        """Internal resolution that skips the pipeline; callers must have
        authenticated through their own path (report rendering after an
        authorized fetch, test fixtures)."""
        return self._resolve(self._load_record(patient_id))

    def get_visit_unchecked(self, visit_id: str) -> Visit:
        return self._load_visit(visit_id)

    def has_record(self, patient_id: str) -> bool:
        return patient_id in self._records_by_patient

    # -- internals --------------------------------------------------------------

    def _update_lifestyle(self, token: str, patient_id: str, payload: dict, ctx_kw: dict) -> str:
        op = self._ops["update_lifestyle"]
        ctx = self._ctx(token, op.name, payload, patient_id, ctx_kw)

        def handler(c: RequestContext):
            def apply(record: MedicalRecord) -> None:
                current = asdict(record.lifestyle) if record.lifestyle else {
                    "smoking": "never", "alcohol": "none", "exercise": ""
                }
                current.update(payload)
                record.lifestyle = Lifestyle(**current)

            record_id = self._mutate_record(patient_id, apply)
            return record_id, record_id

        result = self._pipeline.process(ctx, op, handler)
        self._notify(patient_id)
        return result

    def _cross_field_checks(self, kind: str, payload: dict) -> None:
        # Constraints the declarative schema cannot express.
        if kind == "medication" and payload.get("active") and payload.get("end_date"):
            raise ValidationFailure("end_date: must be absent while the medication is active")
        if kind == "surgery" and "date" in payload:
            today = _date.fromtimestamp(self._clock.now()).isoformat()
            if payload["date"] > today:
                raise ValidationFailure("date: surgery date must not be in the future")

    def _ctx(self, token, operation, payload, patient_id, ctx_kw) -> RequestContext:
        return RequestContext(
            raw_token=token,
            operation=operation,
            payload=payload,
            target_patient=patient_id,
            source_ip=ctx_kw.get("source_ip", "127.0.0.1"),
            user_agent=ctx_kw.get("user_agent", "ehrkit/0.1"),
        )

    def _load_record(self, patient_id: str) -> MedicalRecord:
        record_id = self._records_by_patient.get(patient_id)
        if record_id is None:
            raise NotFoundError(f"no medical record for patient {patient_id}")
        doc = self._store.get(RECORDS, record_id)
        if doc is None:
            raise NotFoundError(f"record document {record_id} missing")
        lifestyle = doc.pop("lifestyle")
        record = MedicalRecord(**doc)
        record.lifestyle = Lifestyle(**lifestyle) if lifestyle else None
        return record

    def _load_visit(self, visit_id: str) -> Visit:
        doc = self._store.get(VISITS, visit_id)
        if doc is None:
            raise NotFoundError(f"visit {visit_id} not found")
        return Visit(**doc)

    def _load_entities(self, kind: str, ids: list[str]) -> list:
        collection = _ENTITY_COLLECTIONS[kind]
        out = []
        for entity_id in ids:
            doc = self._store.get(collection, entity_id)
            if doc is not None:
                out.append(_ENTITY_TYPES[kind](**doc))
        return out

    def _resolve(self, record: MedicalRecord) -> ResolvedRecord:
        visits = [self._load_visit(v) for v in record.visit_ids]
        visits.sort(key=lambda v: (v.date, v.visit_id), reverse=True)
        return ResolvedRecord(
            record=record,
            conditions=self._load_entities("condition", record.condition_ids),
            medications=self._load_entities("medication", record.medication_ids),
            allergies=self._load_entities("allergy", record.allergy_ids),
            surgeries=self._load_entities("surgery", record.surgery_ids),
            immunizations=self._load_entities("immunization", record.immunization_ids),
            lifestyle=record.lifestyle,
            visits=visits,
        )

    def _mutate_record(self, patient_id: str, apply: Callable[[MedicalRecord], None]) -> str:
        """Load-mutate-persist under the record's writer lock; the load is
        inside the lock so concurrent upserts can never lose list updates.
        Bumps version and updated_at on success."""
        record_id = self._records_by_patient.get(patient_id)
        if record_id is None:
            raise NotFoundError(f"no medical record for patient {patient_id}")
        with self._record_lock(record_id):
            record = self._load_record(patient_id)
            apply(record)
            record.version += 1
            record.updated_at = max(self._clock.now(), record.updated_at)
            self._store.put(RECORDS, record.record_id, record.to_document())
        return record_id

    def _record_lock(self, record_id: str) -> threading.Lock:
        with self._lock:
            lock = self._record_locks.get(record_id)
            if lock is None:
                lock = self._record_locks[record_id] = threading.Lock()
            return lock

    def _notify(self, patient_id: str) -> None:
        for listener in self._mutation_listeners:
            listener(patient_id)
