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
from .service import UserDirectory

__all__ = [
    "AdminProfile",
    "Admission",
    "AdmissionState",
    "DataAdditionRequest",
    "DataAdditionState",
    "DataAdditionType",
    "DoctorProfile",
    "EmergencyContact",
    "EventKind",
    "ExaminationRequest",
    "ExaminationState",
    "Hospital",
    "PatientProfile",
    "SystemEvent",
    "UserDirectory",
]
