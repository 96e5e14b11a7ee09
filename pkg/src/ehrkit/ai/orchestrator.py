"""The four AI workflows: history summarization, chatbot sessions,
auto-generated visit reports, and X-ray classification with human review.

Record data is always fetched through the security pipeline using the
orchestrator's own machine-to-machine token, so every AI read of clinical
data is audited like any other access. Conversations are single-writer:
continues on one conversation are serialized, distinct conversations run
fully concurrent. Generator calls never happen while holding record locks.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from typing import Callable

from ..clock import Clock, iso_utc
from ..errors import (
    AccessDeniedError,
    ContractError,
    ForbiddenError,
    NotFoundError,
    UpstreamError,
    ValidationFailure,
)
from ..gateway.cache import TtlCache
from ..identity.permissions import SCOPE_RECORD_READ, Role
from ..identity.tokens import PrincipalClaims
from ..ids import IdSource, random_ids
from ..records.models import ResolvedRecord, Visit
from ..records.service import PatientRecordService
from .clients import XRAY_LABELS, ClassifierClient, GeneratorClient
from .imaging import decode_to_tensor
from .prompts import load_prompt
from .serialize import serialize_record_to_text

REPORT_SECTION_ORDER = (
    "patient_information",
    "visit_summary",
    "diagnosis_and_treatment",
    "vitals_and_lab_results",
    "ai_recommendations",
)

REVIEW_VERDICTS = ("confirmed", "modified", "overridden")

DEGRADED_RECOMMENDATIONS = "AI recommendations unavailable (generator offline)."

# Flagging thresholds for the vitals section: (low, high) per measurement.
VITAL_RANGES = {
    "heart_rate": (60.0, 100.0),
    "blood_pressure_systolic": (90.0, 120.0),
    "blood_pressure_diastolic": (60.0, 80.0),
    "temperature": (36.1, 37.8),
    "spo2": (95.0, 100.0),
}


@dataclass
class Turn:
    author: str  # user | assistant
    content: str
    at: float


@dataclass
class ConversationLog:
    conversation_id: str
    doctor_id: str
    system_role: str
    turns: list[Turn]
    created_at: float


@dataclass
class SummaryResult:
    patient_id: str
    summary_text: str
    generated_at: float
    source_record_version: int


@dataclass
class MedicalReport:
    report_id: str
    patient_id: str
    visit_id: str
    sections: dict[str, str]  # insertion-ordered, REPORT_SECTION_ORDER
    storage_ref: str


@dataclass
class XrayResult:
    result_id: str
    patient_id: str
    image_ref: str
    label: str
    confidence: float
    reviewer_verdict: str = "pending"
    reviewer_id: str | None = None
    final_label: str | None = None


@dataclass
class AiOrchestrator:
    generator: GeneratorClient
    classifier: ClassifierClient
    records: PatientRecordService
    clock: Clock
    service_token: Callable[[], str]  # fresh M2M token with record scopes
    admission_active: Callable[[str, str], bool]
    patient_profile: Callable[[str], dict]
    cache: TtlCache | None = None
    ids: IdSource = field(default_factory=random_ids)
    prompt_version: str = "v1"

    def __post_init__(self):
        self._summaries: dict[str, SummaryResult] = {}
        self._reports: dict[str, MedicalReport] = {}
        self._conversations: dict[str, ConversationLog] = {}
        self._conversation_locks: dict[str, threading.Lock] = {}
        self._xray_results: dict[str, XrayResult] = {}
        self._xray_by_patient: dict[str, list[str]] = {}
        self._lock = threading.Lock()

    # -- summarization -----------------------------------------------------

    def summarize_history(self, claims: PrincipalClaims, patient_id: str) -> SummaryResult:
        self._require_record_reader(claims, patient_id)
        cache_key = f"ai:sum:{patient_id}"
        if self.cache is not None:
            cached = self.cache.get(cache_key)
            if cached is not None:
                return _summary_from_json(cached)
        resolved = self.records.get_record(self.service_token(), patient_id)
        text = serialize_record_to_text(resolved)
        role = load_prompt("summarizer", self.prompt_version)
        summary_text = self.generator.generate(role, [{"role": "user", "content": text}])
        result = SummaryResult(
            patient_id=patient_id,
            summary_text=summary_text,
            generated_at=self.clock.now(),
            source_record_version=resolved.record.version,
        )
        self._summaries[patient_id] = result
        if self.cache is not None:
            self.cache.put(cache_key, _summary_to_json(result))
        return result

    # -- chatbot ----------------------------------------------------------------

    def chat_initiate(self, claims: PrincipalClaims, user_input: str) -> dict:
        self._require_doctor(claims)
        if not user_input or not user_input.strip():
            raise ValidationFailure("user_input: must be nonempty")
        role = load_prompt("chatbot", self.prompt_version)
        bot_reply = self.generator.generate(role, [{"role": "user", "content": user_input}])
        now = self.clock.now()
        conversation = ConversationLog(
            conversation_id=self.ids("conversation"),
            doctor_id=claims.subject,
            system_role=role,
            turns=[Turn("user", user_input, now), Turn("assistant", bot_reply, now)],
            created_at=now,
        )
        with self._lock:
            self._conversations[conversation.conversation_id] = conversation
            self._conversation_locks[conversation.conversation_id] = threading.Lock()
        return {"conversation_id": conversation.conversation_id, "bot_reply": bot_reply}

    def chat_continue(self, claims: PrincipalClaims, conversation_id: str, user_input: str) -> str:
        self._require_doctor(claims)
        if not user_input or not user_input.strip():
            raise ValidationFailure("user_input: must be nonempty")
        conversation = self._own_conversation(claims, conversation_id)
        with self._conversation_locks[conversation_id]:
            messages = [
                {"role": "user" if t.author == "user" else "assistant", "content": t.content}
                for t in conversation.turns
            ]
            messages.append({"role": "user", "content": user_input})
            bot_reply = self.generator.generate(conversation.system_role, messages)
            now = self.clock.now()
            conversation.turns.append(Turn("user", user_input, now))
            conversation.turns.append(Turn("assistant", bot_reply, now))
        return bot_reply

    def list_conversations(self, claims: PrincipalClaims) -> list[dict]:
        self._require_doctor(claims)
        own = [c for c in self._conversations.values() if c.doctor_id == claims.subject]
        own.sort(key=lambda c: (c.created_at, c.conversation_id))
        return [
            {
                "conversation_id": c.conversation_id,
                "first_turn_preview": c.turns[0].content[:80],
                "created_at": iso_utc(c.created_at),
            }
            for c in own
        ]

    def get_conversation(self, claims: PrincipalClaims, conversation_id: str) -> ConversationLog:
        self._require_doctor(claims)
        return self._own_conversation(claims, conversation_id)

    # -- report generation ----------------------------------------------------------

    def generate_report(self, claims: PrincipalClaims, patient_id: str, visit_id: str) -> MedicalReport:
        visit = self.records.get_visit_unchecked(visit_id)
        if claims.is_service:
            if SCOPE_RECORD_READ not in claims.scopes:
                raise AccessDeniedError("report generation needs the record read scope")
        elif not (claims.has_role(Role.DOCTOR) and claims.subject == visit.doctor_id):
            raise ForbiddenError("only the visit's doctor may generate its report")
        resolved = self.records.get_record(self.service_token(), patient_id)
        if visit.visit_id not in resolved.record.visit_ids:
            raise NotFoundError(f"visit {visit_id} not found for patient {patient_id}")

        sections = {
            "patient_information": self._patient_information(patient_id, resolved),
            "visit_summary": self._visit_summary(visit),
            "diagnosis_and_treatment": self._diagnosis_and_treatment(visit, resolved),
            "vitals_and_lab_results": self._vitals_and_labs(visit),
        }
        try:
            role = load_prompt("report", self.prompt_version)
            prompt = self._visit_summary(visit) + "\n" + serialize_record_to_text(resolved)
            sections["ai_recommendations"] = self.generator.generate(
                role, [{"role": "user", "content": prompt}]
            )
        except UpstreamError:
            sections["ai_recommendations"] = DEGRADED_RECOMMENDATIONS

        report_id = self.ids("report")
        rendered = _render_report(report_id, patient_id, visit_id, sections)
        storage_ref = self.records.blobs.put(f"report-{report_id}.txt", rendered.encode("utf-8"))
        report = MedicalReport(
            report_id=report_id,
            patient_id=patient_id,
            visit_id=visit_id,
            sections=sections,
            storage_ref=storage_ref,
        )
        self._reports[report_id] = report
        return report

    # -- X-ray classification -----------------------------------------------------------

    def classify_xray(
        self, claims: PrincipalClaims, patient_id: str, image_bytes: bytes, image_format: str
    ) -> XrayResult:
        self._require_doctor(claims)
        if not self.admission_active(claims.subject, patient_id):
            raise AccessDeniedError("no active admission for this patient")
        tensor = decode_to_tensor(image_bytes, image_format)
        prediction = self.classifier.classify(tensor)
        label, confidence = prediction.get("label"), prediction.get("confidence")
        if label not in XRAY_LABELS:
            raise ContractError(f"classifier returned unknown label {label!r}")
        if not isinstance(confidence, (int, float)) or not 0.0 <= float(confidence) <= 1.0:
            raise ContractError(f"classifier confidence {confidence!r} outside [0, 1]")
        result_id = self.ids("xray")
        image_ref = self.records.blobs.put(f"xray-{result_id}", bytes(image_bytes))
        result = XrayResult(
            result_id=result_id,
            patient_id=patient_id,
            image_ref=image_ref,
            label=label,
            confidence=float(confidence),
        )
        with self._lock:
            self._xray_results[result_id] = result
            self._xray_by_patient.setdefault(patient_id, []).append(result_id)
        return result

    def review_xray(
        self,
        claims: PrincipalClaims,
        result_id: str,
        verdict: str,
        final_label: str | None = None,
    ) -> XrayResult:
        self._require_doctor(claims)
        result = self._xray_results.get(result_id)
        if result is None:
            raise NotFoundError(f"x-ray result {result_id} not found")
        if not self.admission_active(claims.subject, result.patient_id):
            raise AccessDeniedError("no active admission for this patient")
        if verdict not in REVIEW_VERDICTS:
            raise ValidationFailure(f"verdict: must be one of {', '.join(REVIEW_VERDICTS)}")
        if verdict == "confirmed":
            final_label = result.label
        else:
            if final_label not in XRAY_LABELS:
                raise ValidationFailure("final_label: required for modified or overridden verdicts")
        result.reviewer_verdict = verdict
        result.reviewer_id = claims.subject
        result.final_label = final_label
        return result

    def xray_history(self, claims: PrincipalClaims, patient_id: str) -> list[XrayResult]:
        if claims.has_role(Role.PATIENT):
            if claims.subject != patient_id:
                raise AccessDeniedError("patients may only view their own results")
        else:
            self._require_doctor(claims)
            if not self.admission_active(claims.subject, patient_id):
                raise AccessDeniedError("no active admission for this patient")
        return [self._xray_results[r] for r in self._xray_by_patient.get(patient_id, [])]

    # -- internals -------------------------------------------------------------------

    def _require_doctor(self, claims: PrincipalClaims) -> None:
        if not claims.has_role(Role.DOCTOR):
            raise ForbiddenError("doctor-only endpoint")

    def _require_record_reader(self, claims: PrincipalClaims, patient_id: str) -> None:
        if claims.is_service:
            if SCOPE_RECORD_READ not in claims.scopes:
                raise AccessDeniedError("summarization needs the record read scope")
            return
        if claims.has_role(Role.DOCTOR):
            if not self.admission_active(claims.subject, patient_id):
                raise AccessDeniedError("no active admission for this patient")
            return
        raise ForbiddenError("summarization is doctor- or service-only")

    def _own_conversation(self, claims: PrincipalClaims, conversation_id: str) -> ConversationLog:
        conversation = self._conversations.get(conversation_id)
        if conversation is None:
            raise NotFoundError(f"conversation {conversation_id} not found")
        if conversation.doctor_id != claims.subject:
            raise ForbiddenError("not your conversation")
        return conversation

    def _patient_information(self, patient_id: str, resolved: ResolvedRecord) -> str:
        profile = self.patient_profile(patient_id)
        lines = [
            f"Name: {profile.get('name', 'unknown')}",
            f"Patient id: {patient_id}",
            f"Contact: {profile.get('contact') or 'not on file'}",
            f"Known allergies: {len(resolved.allergies)}",
        ]
        if resolved.lifestyle is not None:
            ls = resolved.lifestyle
            lines.append(f"Lifestyle: smoking {ls.smoking}, alcohol {ls.alcohol}")
        return "\n".join(lines)

    def _visit_summary(self, visit: Visit) -> str:
        lines = [
            f"Date: {visit.date}",
            f"Examination: {visit.examination_type}",
            f"Reason: {visit.complaints}",
        ]
        if visit.symptoms:
            lines.append(f"Findings: {', '.join(visit.symptoms)}")
        if visit.notes:
            lines.append(f"Notes: {visit.notes}")
        return "\n".join(lines)

    def _diagnosis_and_treatment(self, visit: Visit, resolved: ResolvedRecord) -> str:
        lines = [f"Diagnosis: {visit.diagnosis}"]
        if visit.treatments:
            lines.append("Prescribed:")
            lines.extend(f"  - {t['name']} {t['dosage']}" for t in visit.treatments)
        active = [m for m in resolved.medications if m.active]
        if active:
            lines.append("Active medications:")
            lines.extend(f"  - {m.name} {m.dosage} {m.frequency}" for m in active)
        return "\n".join(lines)

    def _vitals_and_labs(self, visit: Visit) -> str:
        lines: list[str] = []
        if visit.vitals:
            for name in sorted(visit.vitals):
                value = visit.vitals[name]
                flag = _flag_vital(name, value)
                lines.append(f"{name}: {value}{flag}")
        else:
            lines.append("no vitals recorded")
        labs = [a for a in visit.attachments if a.get("kind") == "lab_result"]
        if labs:
            lines.append("Lab results on file:")
            lines.extend(f"  - {a['storage_ref']}" for a in labs)
        return "\n".join(lines)


def _flag_vital(name: str, value: str) -> str:
    bounds = VITAL_RANGES.get(name)
    if bounds is None:
        return ""
    token = value.split()[0] if value.split() else ""
    try:
        numeric = float(token.split("/")[0])
    except ValueError:
        return ""
    low, high = bounds
    if numeric < low or numeric > high:
        return "  [out of range]"
    return ""


def _render_report(report_id: str, patient_id: str, visit_id: str, sections: dict[str, str]) -> str:
    lines = [
        f"MEDICAL REPORT {report_id}",
        f"patient: {patient_id}; visit: {visit_id}",
        "layout: page=A4; margins=20mm; order=" + ",".join(REPORT_SECTION_ORDER),
        "",
    ]
    for key in REPORT_SECTION_ORDER:
        lines.append(f"== {key.replace('_', ' ').upper()} ==")
        lines.append(sections[key])
        lines.append("")
    return "\n".join(lines)


def _summary_to_json(result: SummaryResult) -> bytes:
    return json.dumps(
        {
            "patient_id": result.patient_id,
            "summary_text": result.summary_text,
            "generated_at": result.generated_at,
            "source_record_version": result.source_record_version,
        },
        sort_keys=True,
    ).encode("utf-8")


def _summary_from_json(data: bytes) -> SummaryResult:
    doc = json.loads(data)
    return SummaryResult(**doc)
