"""User directory: people, hospitals, the admission lifecycle, and the two
patient request workflows (data addition, examination).

Admissions are the sole source of doctor->record access; the security
pipeline consults ``admission_active`` on every doctor read or write.
Admission creation and discharge for a given (patient, doctor) pair are
serialized through a per-pair mutex; request state transitions use
compare-and-set so concurrent admins cannot double-resolve.
"""

from __future__ import annotations

import re
import threading
from typing import Callable

from ..clock import Clock
from ..errors import ConflictError, ForbiddenError, NotFoundError, ValidationFailure
from ..identity.permissions import Role
from ..identity.tokens import PrincipalClaims
from ..ids import IdSource, random_ids
from .models import (
    AdminProfile,
    Admission,
    AdmissionState,
    DataAdditionRequest,
    DataAdditionState,
    DataAdditionType,
    DoctorProfile,
    EmergencyContact,
    EventKind,
    ExaminationRequest,
    ExaminationState,
    Hospital,
    PatientProfile,
    SystemEvent,
)

NATIONAL_ID_PATTERN = re.compile(r"\d{14}")

# Verdict -> state for data-addition resolution.
_VERDICT_STATES = {
    "approved": DataAdditionState.APPROVED,
    "rejected": DataAdditionState.REJECTED,
}

# Called when a data-addition request is approved; wired by the platform to
# insert the corresponding record entity through the machine-to-machine path.
ApprovalHook = Callable[[DataAdditionRequest, str, dict | None], None]


class UserDirectory:
    def __init__(self, clock: Clock, ids: IdSource | None = None):
        self._clock = clock
        self._ids = ids or random_ids()
        self._patients: dict[str, PatientProfile] = {}
        self._doctors: dict[str, DoctorProfile] = {}
        self._admins: dict[str, AdminProfile] = {}
        self._hospitals: dict[str, Hospital] = {}
        self._contacts: dict[str, EmergencyContact] = {}
        self._patient_contacts: dict[str, set[str]] = {}
        self._admissions: dict[str, Admission] = {}
        self._data_requests: dict[str, DataAdditionRequest] = {}
        self._exam_requests: dict[str, ExaminationRequest] = {}
        self._events: list[SystemEvent] = []
        self._national_ids: set[str] = set()
        self._lock = threading.Lock()
        self._pair_locks: dict[tuple[str, str], threading.Lock] = {}
        self._on_data_addition_approved: ApprovalHook | None = None

    # -- wiring ------------------------------------------------------------

    def set_approval_hook(self, hook: ApprovalHook) -> None:
        self._on_data_addition_approved = hook

    def principal_exists(self, principal_id: str, role: Role) -> bool:
        if role == Role.PATIENT:
            return principal_id in self._patients
        if role == Role.DOCTOR:
            return principal_id in self._doctors
        if role == Role.ADMIN:
            return principal_id in self._admins
        return False

    def seed_admin(self, name: str, admin_id: str | None = None) -> str:
        """Admins exist through predefined credentials, not self-registration."""
        admin_id = admin_id or self._ids("admin")
        self._admins[admin_id] = AdminProfile(admin_id=admin_id, name=name)
        return admin_id

    # -- registration ------------------------------------------------------

    def register_patient(
        self,
        claims: PrincipalClaims | None,
        *,
        national_id: str,
        name: str,
        contact: str = "",
        patient_id: str | None = None,
    ) -> str:
        """Desk registration by an admin, or anonymous self-registration
        (patients have no token before they have an account)."""
        if claims is not None and "registerPatient" not in claims.permissions:
            if not (claims.has_role(Role.PATIENT) and patient_id == claims.subject):
                self._event(EventKind.ACCESS_ATTEMPT, claims.subject, "register_patient refused")
                raise ForbiddenError("registering patients requires the registerPatient permission")
        if not NATIONAL_ID_PATTERN.fullmatch(national_id or ""):
            raise ValidationFailure("national_id: must be exactly 14 digits")
        if not name:
            raise ValidationFailure("name: required")
        with self._lock:
            if national_id in self._national_ids:
                raise ConflictError(f"national_id already registered")
            patient_id = patient_id or self._ids("patient")
            if patient_id in self._patients:
                raise ConflictError(f"patient {patient_id} already exists")
            self._patients[patient_id] = PatientProfile(
                patient_id=patient_id,
                national_id=national_id,
                name=name,
                contact=contact,
                registered_at=self._clock.now(),
            )
            self._national_ids.add(national_id)
        actor = claims.subject if claims else patient_id
        self._event(EventKind.REGISTRATION, actor, f"patient {patient_id} registered")
        return patient_id

    def register_doctor(
        self,
        claims: PrincipalClaims,
        *,
        name: str,
        specialty: str,
        hospital_ids: set[str] | None = None,
        doctor_id: str | None = None,
    ) -> str:
        self._require_permission(claims, "registerDoctor")
        hospital_ids = set(hospital_ids or ())
        for hid in hospital_ids:
            if hid not in self._hospitals:
                raise NotFoundError(f"hospital {hid} not found")
        with self._lock:
            doctor_id = doctor_id or self._ids("doctor")
            if doctor_id in self._doctors:
                raise ConflictError(f"doctor {doctor_id} already exists")
            self._doctors[doctor_id] = DoctorProfile(
                doctor_id=doctor_id, name=name, specialty=specialty, hospital_ids=hospital_ids
            )
        self._event(EventKind.REGISTRATION, claims.subject, f"doctor {doctor_id} registered")
        return doctor_id

    def register_hospital(self, claims: PrincipalClaims, *, name: str, region: str) -> str:
        if not claims.has_role(Role.ADMIN):
            raise ForbiddenError("only admins manage hospitals")
        hospital_id = self._ids("hospital")
        self._hospitals[hospital_id] = Hospital(hospital_id=hospital_id, name=name, region=region)
        return hospital_id

    # -- lookups -----------------------------------------------------------

    def get_patient(self, patient_id: str) -> PatientProfile:
        try:
            return self._patients[patient_id]
        except KeyError:
            raise NotFoundError(f"patient {patient_id} not found") from None

    def get_doctor(self, doctor_id: str) -> DoctorProfile:
        try:
            return self._doctors[doctor_id]
        except KeyError:
            raise NotFoundError(f"doctor {doctor_id} not found") from None

    def profile_for_subject(self, claims: PrincipalClaims) -> dict:
        subject = claims.subject
        if subject in self._patients:
            p = self._patients[subject]
            return {"kind": "patient", "id": subject, "name": p.name, "contact": p.contact}
        if subject in self._doctors:
            d = self._doctors[subject]
            return {"kind": "doctor", "id": subject, "name": d.name, "specialty": d.specialty}
        if subject in self._admins:
            return {"kind": "admin", "id": subject, "name": self._admins[subject].name}
        raise NotFoundError(f"no profile for {subject}")

    def list_hospitals(self, claims: PrincipalClaims) -> list[Hospital]:
        if claims is None:
            raise ForbiddenError("authentication required")
        return sorted(self._hospitals.values(), key=lambda h: h.hospital_id)

    # -- admissions ----------------------------------------------------------

    def admit(self, claims: PrincipalClaims, patient_id: str, doctor_id: str) -> Admission:
        self._require_permission(claims, "admitPatient")
        self.get_patient(patient_id)
        self.get_doctor(doctor_id)
        with self._pair_lock(patient_id, doctor_id):
            if any(
                a.patient_id == patient_id
                and a.doctor_id == doctor_id
                and a.state == AdmissionState.ACTIVE
                for a in self._admissions.values()
            ):
                raise ConflictError(f"active admission already exists for ({patient_id}, {doctor_id})")
            admission = Admission(
                admission_id=self._ids("admission"),
                patient_id=patient_id,
                doctor_id=doctor_id,
                admitted_by=claims.subject,
                state=AdmissionState.ACTIVE,
                admitted_at=self._clock.now(),
            )
            self._admissions[admission.admission_id] = admission
        self._event(
            EventKind.ASSIGNMENT,
            claims.subject,
            f"doctor {doctor_id} assigned to patient {patient_id}",
        )
        return admission

    def discharge(self, claims: PrincipalClaims, admission_id: str) -> Admission:
        self._require_permission(claims, "dischargePatient")
        admission = self._admissions.get(admission_id)
        if admission is None:
            raise NotFoundError(f"admission {admission_id} not found")
        with self._pair_lock(admission.patient_id, admission.doctor_id):
            if admission.state == AdmissionState.DISCHARGED:
                raise ConflictError(f"admission {admission_id} already discharged")
            admission.state = AdmissionState.DISCHARGED
            admission.discharged_at = self._clock.now()
        for request in self._exam_requests.values():
            if (
                request.resulting_admission == admission_id
                and request.state == ExaminationState.SCHEDULED
            ):
                request.state = ExaminationState.CLOSED
        self._event(
            EventKind.DISCHARGE,
            claims.subject,
            f"doctor {admission.doctor_id} access to patient {admission.patient_id} revoked",
        )
        return admission

    def list_admissions(
        self,
        claims: PrincipalClaims,
        *,
        by_doctor: str | None = None,
        by_patient: str | None = None,
    ) -> list[Admission]:
        if not claims.has_role(Role.ADMIN):
            if claims.has_role(Role.DOCTOR):
                if by_patient is not None or by_doctor != claims.subject:
                    raise ForbiddenError("doctors may only list their own admissions")
            elif claims.has_role(Role.PATIENT):
                if by_doctor is not None or by_patient != claims.subject:
                    raise ForbiddenError("patients may only list their own admissions")
            else:
                raise ForbiddenError("admissions are not listable for this principal")
        selected = [
            a
            for a in self._admissions.values()
            if (by_doctor is None or a.doctor_id == by_doctor)
            and (by_patient is None or a.patient_id == by_patient)
        ]
        return sorted(selected, key=lambda a: (-a.admitted_at, a.admission_id))

    def admission_active(self, doctor_id: str, patient_id: str) -> bool:
        """Access-control hook used by the security pipeline."""
        return any(
            a.doctor_id == doctor_id
            and a.patient_id == patient_id
            and a.state == AdmissionState.ACTIVE
            for a in self._admissions.values()
        )

    def admission_history(self) -> list[Admission]:
        return list(self._admissions.values())

    # -- data-addition requests ---------------------------------------------

    def submit_data_addition_request(
        self,
        claims: PrincipalClaims,
        *,
        data_type: str,
        issuance_date: str,
        document_ref: str,
    ) -> str:
        self._require_permission(claims, "requestDataAddition")
        try:
            kind = DataAdditionType(data_type)
        except ValueError:
            raise ValidationFailure(f"data_type: unknown value {data_type!r}") from None
        if not issuance_date:
            raise ValidationFailure("issuance_date: required")
        request = DataAdditionRequest(
            request_id=self._ids("datareq"),
            patient_id=claims.subject,
            data_type=kind,
            issuance_date=issuance_date,
            document_ref=document_ref,
        )
        self._data_requests[request.request_id] = request
        return request.request_id

    def forward_request(self, claims: PrincipalClaims, request_id: str, doctor_id: str) -> None:
        if not claims.has_role(Role.ADMIN):
            raise ForbiddenError("only admins forward data-addition requests")
        self.get_doctor(doctor_id)
        request = self._get_data_request(request_id)
        self._transition_data_request(request, DataAdditionState.SUBMITTED, DataAdditionState.FORWARDED)
        request.reviewing_doctor = doctor_id

    def resolve_request(
        self,
        claims: PrincipalClaims,
        request_id: str,
        verdict: str,
        entity_payload: dict | None = None,
    ) -> None:
        if verdict not in _VERDICT_STATES:
            raise ValidationFailure(f"verdict: unknown value {verdict!r}")
        request = self._get_data_request(request_id)
        if not claims.has_role(Role.DOCTOR) or claims.subject != request.reviewing_doctor:
            raise ForbiddenError("only the forwarded doctor may resolve this request")
        self._transition_data_request(request, DataAdditionState.FORWARDED, _VERDICT_STATES[verdict])
        if request.state == DataAdditionState.APPROVED and self._on_data_addition_approved:
            self._on_data_addition_approved(request, claims.subject, entity_payload)

    def get_data_request(self, claims: PrincipalClaims, request_id: str) -> DataAdditionRequest:
        request = self._get_data_request(request_id)
        allowed = (
            claims.has_role(Role.ADMIN)
            or claims.subject == request.patient_id
            or claims.subject == request.reviewing_doctor
        )
        if not allowed:
            raise ForbiddenError("not a party to this request")
        return request

    def list_data_requests(self, claims: PrincipalClaims, state: str | None = None) -> list[DataAdditionRequest]:
        if claims.has_role(Role.ADMIN):
            selected = list(self._data_requests.values())
        elif claims.has_role(Role.DOCTOR):
            selected = [r for r in self._data_requests.values() if r.reviewing_doctor == claims.subject]
        elif claims.has_role(Role.PATIENT):
            selected = [r for r in self._data_requests.values() if r.patient_id == claims.subject]
        else:
            raise ForbiddenError("requests are not listable for this principal")
        if state is not None:
            selected = [r for r in selected if r.state.value == state]
        return sorted(selected, key=lambda r: r.request_id)

    # -- examination requests -------------------------------------------------

    def request_examination(self, claims: PrincipalClaims, requested_type: str) -> ExaminationRequest:
        self._require_permission(claims, "requestExamination")
        if not requested_type:
            raise ValidationFailure("requested_type: required")
        request = ExaminationRequest(
            request_id=self._ids("examreq"),
            patient_id=claims.subject,
            requested_type=requested_type,
        )
        self._exam_requests[request.request_id] = request
        return request

    def schedule_examination(
        self, claims: PrincipalClaims, request_id: str, doctor_id: str
    ) -> Admission:
        """Creates the admission and marks the request scheduled atomically."""
        request = self._exam_requests.get(request_id)
        if request is None:
            raise NotFoundError(f"examination request {request_id} not found")
        if request.state != ExaminationState.PENDING:
            raise ConflictError(f"examination request {request_id} is not pending")
        admission = self.admit(claims, request.patient_id, doctor_id)
        request.state = ExaminationState.SCHEDULED
        request.resulting_admission = admission.admission_id
        return admission

    def list_examination_requests(
        self, claims: PrincipalClaims, state: str | None = None
    ) -> list[ExaminationRequest]:
        if claims.has_role(Role.ADMIN):
            selected = list(self._exam_requests.values())
        elif claims.has_role(Role.PATIENT):
            selected = [r for r in self._exam_requests.values() if r.patient_id == claims.subject]
        else:
            raise ForbiddenError("examination requests are not listable for this principal")
        if state is not None:
            selected = [r for r in selected if r.state.value == state]
        return sorted(selected, key=lambda r: r.request_id)

    # -- emergency contacts ----------------------------------------------------

    def assign_emergency_contact(
        self, claims: PrincipalClaims, patient_id: str, *, name: str, phone: str
    ) -> str:
        if not claims.has_role(Role.PATIENT) or claims.subject != patient_id:
            raise ForbiddenError("patients assign their own emergency contacts")
        self.get_patient(patient_id)
        if not name or not phone:
            raise ValidationFailure("name and phone: required")
        with self._lock:
            existing = next(
                (c for c in self._contacts.values() if c.name == name and c.phone == phone), None
            )
            contact = existing or EmergencyContact(
                contact_id=self._ids("contact"), name=name, phone=phone
            )
            self._contacts[contact.contact_id] = contact
            self._patient_contacts.setdefault(patient_id, set()).add(contact.contact_id)
        return contact.contact_id

    def contacts_for(self, claims: PrincipalClaims, patient_id: str) -> list[EmergencyContact]:
        if not claims.has_role(Role.ADMIN) and claims.subject != patient_id:
            raise ForbiddenError("not your contact list")
        ids = self._patient_contacts.get(patient_id, set())
        return sorted((self._contacts[i] for i in ids), key=lambda c: c.contact_id)

    # -- events ------------------------------------------------------------------

    def events(self) -> tuple[SystemEvent, ...]:
        return tuple(self._events)

    # -- internals ----------------------------------------------------------------

    def _event(self, kind: EventKind, actor_id: str, detail: str) -> None:
        self._events.append(
            SystemEvent(
                event_id=self._ids("event"),
                actor_id=actor_id,
                event_kind=kind,
                detail=detail,
                at=self._clock.now(),
            )
        )

    def _require_permission(self, claims: PrincipalClaims, permission: str) -> None:
        if permission not in claims.permissions:
            self._event(
                EventKind.ACCESS_ATTEMPT, claims.subject, f"missing permission {permission}"
            )
            raise ForbiddenError(f"requires the {permission} permission")

    def _pair_lock(self, patient_id: str, doctor_id: str) -> threading.Lock:
        key = (patient_id, doctor_id)
        with self._lock:
            lock = self._pair_locks.get(key)
            if lock is None:
                lock = self._pair_locks[key] = threading.Lock()
            return lock

    def _get_data_request(self, request_id: str) -> DataAdditionRequest:
        request = self._data_requests.get(request_id)
        if request is None:
            raise NotFoundError(f"data-addition request {request_id} not found")
        return request

    def _transition_data_request(
        self, request: DataAdditionRequest, expect: DataAdditionState, to: DataAdditionState
    ) -> None:
        # Compare-and-set under the directory lock so concurrent transitions
        # cannot both succeed.
        with self._lock:
            if request.state != expect:
                raise ConflictError(
                    f"request {request.request_id} is {request.state.value}, expected {expect.value}"
                )
            request.state = to
