"""Deterministic plain-text rendering of a resolved medical record.

The output feeds the generation model, so it is stable by construction:
fixed section order, fixed phrasing, visits newest first, and byte-identical
output for equal records.
"""

from __future__ import annotations

from ..records.models import ResolvedRecord

NONE_RECORDED = "  none recorded"


def serialize_record_to_text(resolved: ResolvedRecord) -> str:
    lines: list[str] = []

    lines.append("Conditions:")
    for c in resolved.conditions:
        onset = f"; onset {c.onset_date}" if c.onset_date else ""
        notes = f" notes: {c.notes}" if c.notes else ""
        lines.append(f"  - {c.name} ({'chronic' if c.chronic else 'non-chronic'}{onset}){notes}")
    if not resolved.conditions:
        lines.append(NONE_RECORDED)

    lines.append("Medications:")
    for m in resolved.medications:
        period = f"; started {m.start_date}" if m.start_date else ""
        if m.end_date:
            period += f"; ended {m.end_date}"
        lines.append(
            f"  - {m.name} {m.dosage} {m.frequency} ({'active' if m.active else 'past'}{period})"
        )
    if not resolved.medications:
        lines.append(NONE_RECORDED)

    lines.append("Allergies:")
    for a in resolved.allergies:
        lines.append(f"  - {a.allergen} ({a.category}, {a.severity})")
    if not resolved.allergies:
        lines.append(NONE_RECORDED)

    lines.append("Surgeries:")
    for s in resolved.surgeries:
        outcome = f"; outcome: {s.outcome}" if s.outcome else ""
        lines.append(f"  - {s.name} on {s.date}{outcome}")
    if not resolved.surgeries:
        lines.append(NONE_RECORDED)

    lines.append("Immunizations:")
    for i in resolved.immunizations:
        lines.append(f"  - {i.vaccine} on {i.date}")
    if not resolved.immunizations:
        lines.append(NONE_RECORDED)

    lines.append("Lifestyle:")
    if resolved.lifestyle is not None:
        ls = resolved.lifestyle
        lines.append(f"  smoking: {ls.smoking}; alcohol: {ls.alcohol}; exercise: {ls.exercise}")
    else:
        lines.append(NONE_RECORDED)

    lines.append("Visits (newest first):")
    for v in resolved.visits:
        parts = [f"  - [{v.date}] {v.examination_type} with doctor {v.doctor_id}"]
        parts.append(f"complaints: {v.complaints}")
        parts.append(f"diagnosis: {v.diagnosis}")
        if v.symptoms:
            parts.append(f"symptoms: {', '.join(v.symptoms)}")
        if v.treatments:
            treatments = ", ".join(f"{t['name']} ({t['dosage']})" for t in v.treatments)
            parts.append(f"treatments: {treatments}")
        if v.notes:
            parts.append(f"notes: {v.notes}")
        lines.append("; ".join(parts))
    if not resolved.visits:
        lines.append(NONE_RECORDED)

    return "\n".join(lines) + "\n"
