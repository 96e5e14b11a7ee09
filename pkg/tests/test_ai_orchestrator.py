from __future__ import annotations

from pathlib import Path

import pytest

from ehrkit.ai.clients import FailingGenerator
from ehrkit.ai.orchestrator import DEGRADED_RECOMMENDATIONS, REPORT_SECTION_ORDER
from ehrkit.errors import (
    AccessDeniedError,
    ForbiddenError,
    NotFoundError,
    UpstreamError,
    ValidationFailure,
)

from .conftest import build_world

GOLDEN = Path(__file__).parent / "golden"


class TestSummarize:
    def test_mock_generator_summary_matches_golden(self, world):
        result = world.platform.ai.summarize_history(world.doctor_claims, world.patient_id)
        assert result.summary_text == (GOLDEN / "summary_patient1.txt").read_text()
        assert result.patient_id == world.patient_id

    def test_repeat_within_ttl_serves_from_cache(self, world):
        ai = world.platform.ai
        ai.summarize_history(world.doctor_claims, world.patient_id)
        calls_after_first = len(world.generator.calls)
        again = ai.summarize_history(world.doctor_claims, world.patient_id)
        assert len(world.generator.calls) == calls_after_first  # generator not re-invoked
        assert again.summary_text == (GOLDEN / "summary_patient1.txt").read_text()

    def test_record_mutation_invalidates_and_regenerates(self, world):
        ai = world.platform.ai
        first = ai.summarize_history(world.doctor_claims, world.patient_id)
        world.platform.records.upsert_entity(
            world.doctor_token,
            world.patient_id,
            "condition",
            {"name": "asthma", "chronic": True},
        )
        second = ai.summarize_history(world.doctor_claims, world.patient_id)
        assert second.source_record_version > first.source_record_version

    def test_ttl_expiry_regenerates(self, world):
        ai = world.platform.ai
        ai.summarize_history(world.doctor_claims, world.patient_id)
        calls = len(world.generator.calls)
        world.clock.advance(301)
        ai.summarize_history(world.doctor_claims, world.patient_id)
        assert len(world.generator.calls) == calls + 1

    def test_unadmitted_doctor_denied(self, world):
        with pytest.raises(AccessDeniedError):
            world.platform.ai.summarize_history(world.other_doctor_claims, world.patient_id)

    def test_patient_cannot_summarize(self, world):
        with pytest.raises(ForbiddenError):
            world.platform.ai.summarize_history(world.patient_claims, world.patient_id)

    def test_generator_failure_caches_nothing(self):
        world = build_world(generator=FailingGenerator())
        with pytest.raises(UpstreamError):
            world.platform.ai.summarize_history(world.doctor_claims, world.patient_id)
        assert world.platform.cache.get(f"ai:sum:{world.patient_id}") is None

    def test_missing_record_is_not_found(self, world):
        world.platform.directory.admit(
            world.admin_claims, world.other_patient_id, world.doctor_id
        )
        with pytest.raises(NotFoundError):
            world.platform.ai.summarize_history(world.doctor_claims, world.other_patient_id)

    def test_service_scope_path_allowed(self, world):
        token = world.platform.ai_service_token()
        claims = world.platform.identity.validate_token(token, world.platform.audience)
        result = world.platform.ai.summarize_history(claims, world.patient_id)
        assert result.summary_text

    def test_m2m_read_is_audited_with_service_actor(self, world):
        world.platform.ai.summarize_history(world.doctor_claims, world.patient_id)
        entries = world.platform.audit.query(world.admin_claims, page_size=1000)
        assert entries[-1].actor_id == "ai-service"
        assert entries[-1].action == "VIEW"


class TestChat:
    def test_initiate_returns_conversation_and_reply(self, world):
        out = world.platform.ai.chat_initiate(world.doctor_claims, "What are the symptoms of Asthma?")
        assert out["conversation_id"]
        assert out["bot_reply"]

    def test_empty_input_rejected(self, world):
        with pytest.raises(ValidationFailure):
            world.platform.ai.chat_initiate(world.doctor_claims, "   ")

    def test_patient_token_forbidden(self, world):
        with pytest.raises(ForbiddenError):
            world.platform.ai.chat_initiate(world.patient_claims, "hello")

    def test_continue_appends_two_turns(self, world):
        ai = world.platform.ai
        out = ai.chat_initiate(world.doctor_claims, "What are the symptoms of Asthma?")
        ai.chat_continue(world.doctor_claims, out["conversation_id"], "How can I treat it?")
        log = ai.get_conversation(world.doctor_claims, out["conversation_id"])
        assert len(log.turns) == 4
        assert [t.author for t in log.turns] == ["user", "assistant", "user", "assistant"]

    def test_foreign_conversation_forbidden(self, world):
        out = world.platform.ai.chat_initiate(world.doctor_claims, "query")
        with pytest.raises(ForbiddenError):
            world.platform.ai.chat_continue(
                world.other_doctor_claims, out["conversation_id"], "mine now"
            )

    def test_unknown_conversation_not_found(self, world):
        with pytest.raises(NotFoundError):
            world.platform.ai.chat_continue(world.doctor_claims, "conversation-nope", "hi")

    def test_prompt_history_fidelity_on_continue(self, world):
        ai = world.platform.ai
        out = ai.chat_initiate(world.doctor_claims, "first question")
        ai.chat_continue(world.doctor_claims, out["conversation_id"], "second question")
        last_call = world.generator.calls[-1]
        log = ai.get_conversation(world.doctor_claims, out["conversation_id"])
        persisted_before_last_reply = [
            {"role": "user" if t.author == "user" else "assistant", "content": t.content}
            for t in log.turns[:-1]  # everything except the reply that call produced
        ]
        assert last_call["messages"] == persisted_before_last_reply
        assert last_call["system_role"] == log.system_role

    def test_turn_parity_after_n_continues(self, world):
        ai = world.platform.ai
        out = ai.chat_initiate(world.doctor_claims, "q0")
        for i in range(5):
            ai.chat_continue(world.doctor_claims, out["conversation_id"], f"q{i + 1}")
        log = ai.get_conversation(world.doctor_claims, out["conversation_id"])
        assert len(log.turns) == 2 * (5 + 1)

    def test_listing_is_owner_scoped_and_ordered(self, world):
        ai = world.platform.ai
        first = ai.chat_initiate(world.doctor_claims, "alpha")
        world.clock.advance(10)
        ai.chat_initiate(world.other_doctor_claims, "not mine")
        world.clock.advance(10)
        second = ai.chat_initiate(world.doctor_claims, "beta")
        listing = ai.list_conversations(world.doctor_claims)
        assert [c["conversation_id"] for c in listing] == [
            first["conversation_id"],
            second["conversation_id"],
        ]
        assert listing[0]["first_turn_preview"] == "alpha"

    def test_empty_listing(self, world):
        assert world.platform.ai.list_conversations(world.other_doctor_claims) == []

    def test_generator_failure_persists_no_conversation(self):
        world = build_world(generator=FailingGenerator())
        with pytest.raises(UpstreamError):
            world.platform.ai.chat_initiate(world.doctor_claims, "hello?")
        assert world.platform.ai.list_conversations(world.doctor_claims) == []


class TestReport:
    def test_report_has_all_five_sections_in_order(self, world):
        report = world.platform.ai.generate_report(
            world.doctor_claims, world.patient_id, world.visit_id
        )
        assert tuple(report.sections.keys()) == REPORT_SECTION_ORDER

    def test_rendered_report_matches_golden(self, world):
        report = world.platform.ai.generate_report(
            world.doctor_claims, world.patient_id, world.visit_id
        )
        rendered = world.platform.records.blobs.get(report.storage_ref).decode()
        assert rendered == (GOLDEN / "report_patient1.txt").read_text()

    def test_visit_without_vitals_still_renders(self, world):
        records = world.platform.records
        visit_id = records.create_visit(
            world.doctor_token,
            world.patient_id,
            {
                "examination_type": "routine",
                "date": "2024-08-01",
                "complaints": "checkup",
                "diagnosis": "healthy",
            },
        )
        report = world.platform.ai.generate_report(world.doctor_claims, world.patient_id, visit_id)
        assert "no vitals recorded" in report.sections["vitals_and_lab_results"]
        assert tuple(report.sections.keys()) == REPORT_SECTION_ORDER

    def test_generator_down_degrades_only_recommendations(self):
        world = build_world(generator=FailingGenerator())
        report = world.platform.ai.generate_report(
            world.doctor_claims, world.patient_id, world.visit_id
        )
        assert report.sections["ai_recommendations"] == DEGRADED_RECOMMENDATIONS
        for key in REPORT_SECTION_ORDER[:-1]:
            assert report.sections[key].strip()

    def test_other_doctor_cannot_generate(self, world):
        with pytest.raises(ForbiddenError):
            world.platform.ai.generate_report(
                world.other_doctor_claims, world.patient_id, world.visit_id
            )

    def test_service_principal_can_generate(self, world):
        token = world.platform.ai_service_token()
        claims = world.platform.identity.validate_token(token, world.platform.audience)
        report = world.platform.ai.generate_report(claims, world.patient_id, world.visit_id)
        assert report.report_id

    def test_missing_visit_not_found(self, world):
        with pytest.raises(NotFoundError):
            world.platform.ai.generate_report(world.doctor_claims, world.patient_id, "visit-nope")

    def test_out_of_range_vitals_are_flagged(self, world):
        report = world.platform.ai.generate_report(
            world.doctor_claims, world.patient_id, world.visit_id
        )
        vitals = report.sections["vitals_and_lab_results"]
        assert "blood_pressure_systolic: 150 mmHg  [out of range]" in vitals
        assert "heart_rate: 72 bpm" in vitals
        assert "heart_rate: 72 bpm  [out of range]" not in vitals


class TestByteStability:
    def test_summary_report_and_serialization_reproduce_across_fresh_builds(self):
        outputs = []
        for _ in range(2):
            world = build_world()
            claims = world.doctor_claims
            summary = world.platform.ai.summarize_history(claims, world.patient_id)
            report = world.platform.ai.generate_report(claims, world.patient_id, world.visit_id)
            rendered = world.platform.records.blobs.get(report.storage_ref)
            outputs.append((summary.summary_text.encode(), rendered))
        assert outputs[0] == outputs[1]
