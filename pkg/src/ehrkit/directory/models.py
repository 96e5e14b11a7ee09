"""Domain types for the user directory."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


@dataclass
class PatientProfile:
    patient_id: str
    national_id: str
    name: str
    contact: str
    registered_at: float


@dataclass
class DoctorProfile:
    doctor_id: str
    name: str
    specialty: str
    hospital_ids: set[str] = field(default_factory=set)


@dataclass
class AdminProfile:
    admin_id: str
    name: str


@dataclass
class Hospital:
    hospital_id: str
    name: str
    region: str


@dataclass
class EmergencyContact:
    contact_id: str
    name: str
    phone: str


class AdmissionState(str, Enum):
    ACTIVE = "active"
    DISCHARGED = "discharged"


@dataclass
class Admission:
    admission_id: str
    patient_id: str
    doctor_id: str
    admitted_by: str
    state: AdmissionState
    admitted_at: float
    discharged_at: float | None = None


class DataAdditionType(str, Enum):
    TEST_RESULT = "test_result"
    PRESCRIPTION = "prescription"
    REPORT = "report"
    DIAGNOSIS = "diagnosis"
    SURGERY = "surgery"


class DataAdditionState(str, Enum):
    SUBMITTED = "submitted"
    FORWARDED = "forwarded"
    APPROVED = "approved"
    REJECTED = "rejected"


@dataclass
class DataAdditionRequest:
    request_id: str
    patient_id: str
    data_type: DataAdditionType
    issuance_date: str
    document_ref: str
    state: DataAdditionState = DataAdditionState.SUBMITTED
    reviewing_doctor: str | None = None


class ExaminationState(str, Enum):
    PENDING = "pending"
    SCHEDULED = "scheduled"
    CLOSED = "closed"


@dataclass
class ExaminationRequest:
    request_id: str
    patient_id: str
    requested_type: str
    state: ExaminationState = ExaminationState.PENDING
    resulting_admission: str | None = None


class EventKind(str, Enum):
    ACCESS_ATTEMPT = "access_attempt"
    ASSIGNMENT = "assignment"
    REGISTRATION = "registration"
    DISCHARGE = "discharge"


@dataclass(frozen=True)
class SystemEvent:
    event_id: str
    actor_id: str
    event_kind: EventKind
    detail: str
    at: float
