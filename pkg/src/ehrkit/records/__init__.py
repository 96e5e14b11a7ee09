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
from .service import ENTITY_KINDS, PatientRecordService
from .store import BlobStore, DocumentStore, InMemoryBlobStore, InMemoryDocumentStore

__all__ = [
    "Allergy",
    "BlobStore",
    "Condition",
    "DocumentStore",
    "ENTITY_KINDS",
    "Immunization",
    "InMemoryBlobStore",
    "InMemoryDocumentStore",
    "Lifestyle",
    "MedicalRecord",
    "Medication",
    "PatientRecordService",
    "ResolvedRecord",
    "Surgery",
    "Visit",
]
