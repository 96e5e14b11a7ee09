from __future__ import annotations

import pytest

from ehrkit.ai.clients import RecordingGenerator
from ehrkit.clock import ManualClock
from ehrkit.demo import seed_demo
from ehrkit.identity.permissions import Role
from ehrkit.ids import sequential_ids
from ehrkit.platform import Platform

SIGNING_KEY = "test-signing-key"


class World:
    """A seeded platform plus ready-made tokens and claims per principal."""

    def __init__(self, platform: Platform, clock: ManualClock, generator: RecordingGenerator):
        self.platform = platform
        self.clock = clock
        self.generator = generator
        self.ids = seed_demo(platform)
        self.patient_id = self.ids["patient_id"]
        self.doctor_id = self.ids["doctor_id"]
        self.admin_id = self.ids["admin_id"]
        self.visit_id = self.ids["visit_id"]
        self.admission_id = self.ids["admission_id"]

        directory = platform.directory
        admin_claims = self.claims_for(self.admin_id, Role.ADMIN)
        self.other_doctor_id = directory.register_doctor(
            admin_claims, name="Dr. Nour Adel", specialty="radiology", doctor_id="doctor-2"
        )
        self.other_patient_id = directory.register_patient(
            admin_claims,
            national_id="29911223344556",
            name="Mona Fathy",
            contact="",
            patient_id="patient-2",
        )

    def token_for(self, principal_id: str, role: Role, ttl: int = 3600) -> str:
        return self.platform.identity.issue_user_token(principal_id, role, ttl)

    def claims_for(self, principal_id: str, role: Role, ttl: int = 3600):
        token = self.token_for(principal_id, role, ttl)
        return self.platform.identity.validate_token(token, self.platform.audience)

    @property
    def doctor_token(self) -> str:
        return self.token_for(self.doctor_id, Role.DOCTOR)

    @property
    def other_doctor_token(self) -> str:
        return self.token_for(self.other_doctor_id, Role.DOCTOR)

    @property
    def patient_token(self) -> str:
        return self.token_for(self.patient_id, Role.PATIENT)

    @property
    def admin_token(self) -> str:
        return self.token_for(self.admin_id, Role.ADMIN)

    @property
    def doctor_claims(self):
        return self.claims_for(self.doctor_id, Role.DOCTOR)

    @property
    def other_doctor_claims(self):
        return self.claims_for(self.other_doctor_id, Role.DOCTOR)

    @property
    def patient_claims(self):
        return self.claims_for(self.patient_id, Role.PATIENT)

    @property
    def admin_claims(self):
        return self.claims_for(self.admin_id, Role.ADMIN)


def build_world(**platform_kw) -> World:
    clock = platform_kw.pop("clock", None) or ManualClock()
    generator = platform_kw.pop("generator", None) or RecordingGenerator()
    platform = Platform(
        clock=clock,
        ids=sequential_ids(),
        signing_key=SIGNING_KEY,
        generator=generator,
        **platform_kw,
    )
    return World(platform, clock, generator)


@pytest.fixture
def world() -> World:
    return build_world()


@pytest.fixture
def manual_clock() -> ManualClock:
    return ManualClock()
