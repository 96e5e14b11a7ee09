"""Clinical domain types: the per-patient record aggregate and its entities."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field


@dataclass
class Condition:
    condition_id: str
    record_id: str
    name: str
    chronic: bool
    onset_date: str | None = None
    notes: str | None = None


@dataclass
class Medication:
    medication_id: str
    record_id: str
    name: str
    dosage: str
    frequency: str
    active: bool
    start_date: str | None = None
    end_date: str | None = None


@dataclass
class Allergy:
    allergy_id: str
    record_id: str
    allergen: str
    category: str  # drug | food | environmental
    severity: str  # mild | moderate | severe


@dataclass
class Surgery:
    surgery_id: str
    record_id: str
    name: str
    date: str
    outcome: str | None = None


@dataclass
class Immunization:
    immunization_id: str
    record_id: str
    vaccine: str
    date: str


@dataclass
class Lifestyle:
    smoking: str  # never | former | current
    alcohol: str  # none | occasional | regular
    exercise: str


@dataclass
class Visit:
    visit_id: str
    record_id: str
    examination_type: str  # routine | follow_up | emergency
    date: str
    doctor_id: str
    complaints: str
    diagnosis: str
    symptoms: list[str] = field(default_factory=list)
    treatments: list[dict] = field(default_factory=list)  # {name, dosage}
    notes: str = ""
    vitals: dict[str, str] = field(default_factory=dict)
    attachments: list[dict] = field(default_factory=list)  # {kind, storage_ref}


@dataclass
class MedicalRecord:
    record_id: str
    patient_id: str
    condition_ids: list[str] = field(default_factory=list)
    medication_ids: list[str] = field(default_factory=list)
    allergy_ids: list[str] = field(default_factory=list)
    surgery_ids: list[str] = field(default_factory=list)
    immunization_ids: list[str] = field(default_factory=list)
    lifestyle: Lifestyle | None = None
    visit_ids: list[str] = field(default_factory=list)
    created_at: float = 0.0
    updated_at: float = 0.0
    version: int = 0

    def to_document(self) -> dict:
        return asdict(self)


@dataclass
class ResolvedRecord:
    """The aggregate with every referenced entity loaded."""

    record: MedicalRecord
    conditions: list[Condition]
    medications: list[Medication]
    allergies: list[Allergy]
    surgeries: list[Surgery]
    immunizations: list[Immunization]
    lifestyle: Lifestyle | None
    visits: list[Visit]
