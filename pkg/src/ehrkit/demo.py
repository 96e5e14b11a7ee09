"""Seeds a small working world: one admin, one hospital, one doctor, one
admitted patient with a populated record and a visit. Used by the demo
server and end-to-end tests."""

from __future__ import annotations

from .identity.permissions import Role
from .platform import Platform

DEMO_NATIONAL_ID = "29001011234567"


def seed_demo(platform: Platform) -> dict:
    directory = platform.directory
    identity = platform.identity

    admin_id = directory.seed_admin("Front Desk", admin_id="admin-1")
    admin_token = identity.issue_user_token(admin_id, Role.ADMIN, 86400)
    admin_claims = identity.validate_token(admin_token, platform.audience)

    hospital_id = directory.register_hospital(admin_claims, name="Nile General", region="Cairo")
    directory.register_hospital(admin_claims, name="Delta Clinic", region="Alexandria")

    doctor_id = directory.register_doctor(
        admin_claims,
        name="Dr. Salma Hassan",
        specialty="cardiology",
        hospital_ids={hospital_id},
        doctor_id="doctor-1",
    )
    patient_id = directory.register_patient(
        admin_claims,
        national_id=DEMO_NATIONAL_ID,
        name="Omar Khaled",
        contact="omar@example.net",
        patient_id="patient-1",
    )
    admission = directory.admit(admin_claims, patient_id, doctor_id)

    doctor_token = identity.issue_user_token(doctor_id, Role.DOCTOR, 86400)
    records = platform.records
    records.create_record(doctor_token, patient_id)
    records.upsert_entity(
        doctor_token,
        patient_id,
        "condition",
        {"name": "hypertension", "chronic": True, "onset_date": "2019-03-01"},
    )
    records.upsert_entity(
        doctor_token,
        patient_id,
        "medication",
        {"name": "lisinopril", "dosage": "10mg", "frequency": "daily", "active": True,
         "start_date": "2019-03-05"},
    )
    records.upsert_entity(
        doctor_token,
        patient_id,
        "allergy",
        {"allergen": "penicillin", "category": "drug", "severity": "severe"},
    )
    records.upsert_entity(
        doctor_token,
        patient_id,
        "surgery",
        {"name": "appendectomy", "date": "2015-06-10", "outcome": "full recovery"},
    )
    # Immunizations and lifestyle have no user-role permission; they enter
    # through the machine-to-machine write path.
    m2m = platform.user_service_token()
    records.upsert_entity(
        m2m, patient_id, "immunization", {"vaccine": "influenza", "date": "2023-10-01"}
    )
    records.upsert_entity(
        m2m,
        patient_id,
        "lifestyle",
        {"smoking": "never", "alcohol": "occasional", "exercise": "twice weekly"},
    )
    visit_id = records.create_visit(
        doctor_token,
        patient_id,
        {
            "examination_type": "follow_up",
            "date": "2024-05-02",
            "complaints": "episodic chest tightness",
            "diagnosis": "stable hypertension",
            "symptoms": ["fatigue", "mild headache"],
            "treatments": [{"name": "lisinopril", "dosage": "10mg"}],
            "notes": "continue current regimen; review in 3 months",
            "vitals": {
                "heart_rate": "72 bpm",
                "blood_pressure_systolic": "150 mmHg",
                "blood_pressure_diastolic": "95 mmHg",
                "spo2": "98 %",
            },
        },
    )

    return {
        "admin_id": admin_id,
        "hospital_id": hospital_id,
        "doctor_id": doctor_id,
        "patient_id": patient_id,
        "admission_id": admission.admission_id,
        "visit_id": visit_id,
    }
