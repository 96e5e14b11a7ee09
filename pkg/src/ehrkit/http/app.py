"""HTTP surface: one gateway port fronting every service.

The gateway middleware enforces per-IP and per-user rate limits (429 with
Retry-After), emits a structured access log line per request, and forwards
the Authorization header unchanged to the owning service. Domain errors map
to machine-readable {error_kind, layer, detail} bodies; stack traces never
leave the process.
"""

from __future__ import annotations

import json
import logging
import time
from typing import Optional

from fastapi import Body, Depends, FastAPI, File, Form, Request, UploadFile
from fastapi.responses import JSONResponse, PlainTextResponse, Response

from ..clock import iso_utc
from ..directory.models import AdmissionState
from ..errors import EhrError, RateLimitedError, UnauthorizedError
from ..gateway.router import resolve_upstream
from ..identity.permissions import Role
from ..identity.tokens import PrincipalClaims
from ..platform import Platform

access_log = logging.getLogger("ehrkit.gateway.access")


def create_app(platform: Platform) -> FastAPI:
    app = FastAPI(title="ehrkit", version="0.1.0", docs_url=None, redoc_url=None)
    app.state.platform = platform

    # -- gateway concerns ----------------------------------------------------

    @app.middleware("http")
    async def gateway_middleware(request: Request, call_next):
        started = time.perf_counter()
        ip = request.client.host if request.client else "unknown"
        principal = _principal_for_rate_limit(platform, request)
        decision = platform.ratelimiter.check(ip, principal, platform.clock.now())
        if not decision.allowed:
            response = _error_response(RateLimitedError(decision.retry_after))
            response.headers["Retry-After"] = str(decision.retry_after)
        else:
            response = await call_next(request)
        access_log.info(
            "%s",
            json.dumps(
                {
                    "method": request.method,
                    "path": request.url.path,
                    "status": response.status_code,
                    "latency_ms": round((time.perf_counter() - started) * 1000.0, 2),
                },
                sort_keys=True,
            ),
        )
        return response

    @app.exception_handler(EhrError)
    async def domain_error_handler(request: Request, exc: EhrError):
        return _error_response(exc)

    # -- auth -------------------------------------------------------------------

    def current_claims(request: Request) -> PrincipalClaims:
        token = _bearer_token(request)
        if token is None:
            raise UnauthorizedError("missing token")
        return platform.identity.validate_token(token, platform.audience)

    def maybe_claims(request: Request) -> Optional[PrincipalClaims]:
        token = _bearer_token(request)
        if token is None:
            return None
        return platform.identity.validate_token(token, platform.audience)

    def raw_token(request: Request) -> str:
        token = _bearer_token(request)
        if token is None:
            raise UnauthorizedError("missing token")
        return token

    # -- identity endpoints --------------------------------------------------------

    @app.post("/auth/login")
    def login(body: dict = Body(...)):
        role = Role(body.get("role", ""))
        ttl = int(body.get("ttl", 3600))
        token = platform.identity.issue_user_token(body.get("principal_id", ""), role, ttl)
        return {"access_token": token, "token_type": "Bearer", "expires_in": ttl}

    @app.post("/auth/token")
    def client_credentials(body: dict = Body(...)):
        scopes = body.get("scopes")
        if scopes is None:
            scopes = (body.get("scope") or "").split()
        token = platform.identity.issue_service_token(
            body.get("client_id", ""), body.get("client_secret", ""), set(scopes)
        )
        return {"access_token": token, "token_type": "Bearer"}

    # -- user directory -----------------------------------------------------------

    @app.get("/api/user/profile")
    def profile(claims: PrincipalClaims = Depends(current_claims)):
        return platform.directory.profile_for_subject(claims)

    @app.post("/api/patients", status_code=201)
    def register_patient(request: Request, body: dict = Body(...)):
        claims = maybe_claims(request)
        patient_id = platform.directory.register_patient(
            claims,
            national_id=body.get("national_id", ""),
            name=body.get("name", ""),
            contact=body.get("contact", ""),
            patient_id=body.get("patient_id"),
        )
        return {"patient_id": patient_id}

    @app.post("/api/doctors", status_code=201)
    def register_doctor(body: dict = Body(...), claims: PrincipalClaims = Depends(current_claims)):
        doctor_id = platform.directory.register_doctor(
            claims,
            name=body.get("name", ""),
            specialty=body.get("specialty", ""),
            hospital_ids=set(body.get("hospital_ids", [])),
            doctor_id=body.get("doctor_id"),
        )
        return {"doctor_id": doctor_id}

    @app.post("/api/admissions", status_code=201)
    def admit(body: dict = Body(...), claims: PrincipalClaims = Depends(current_claims)):
        admission = platform.directory.admit(
            claims, body.get("patient_id", ""), body.get("doctor_id", "")
        )
        return _admission_doc(admission)

    @app.post("/api/admissions/{admission_id}/discharge")
    def discharge(admission_id: str, claims: PrincipalClaims = Depends(current_claims)):
        return _admission_doc(platform.directory.discharge(claims, admission_id))

    @app.get("/api/admissions")
    def list_admissions(
        doctor_id: str | None = None,
        patient_id: str | None = None,
        claims: PrincipalClaims = Depends(current_claims),
    ):
        admissions = platform.directory.list_admissions(
            claims, by_doctor=doctor_id, by_patient=patient_id
        )
        return [_admission_doc(a) for a in admissions]

    @app.post("/api/requests/data-addition", status_code=201)
    def submit_data_addition(body: dict = Body(...), claims: PrincipalClaims = Depends(current_claims)):
        request_id = platform.directory.submit_data_addition_request(
            claims,
            data_type=body.get("data_type", ""),
            issuance_date=body.get("issuance_date", ""),
            document_ref=body.get("document_ref", ""),
        )
        return {"request_id": request_id}

    @app.post("/api/requests/data-addition/{request_id}/forward")
    def forward_data_addition(
        request_id: str, body: dict = Body(...), claims: PrincipalClaims = Depends(current_claims)
    ):
        platform.directory.forward_request(claims, request_id, body.get("doctor_id", ""))
        return _data_request_doc(platform.directory.get_data_request(claims, request_id))

    @app.post("/api/requests/data-addition/{request_id}/resolve")
    def resolve_data_addition(
        request_id: str, body: dict = Body(...), claims: PrincipalClaims = Depends(current_claims)
    ):
        platform.directory.resolve_request(
            claims, request_id, body.get("verdict", ""), body.get("entity")
        )
        return _data_request_doc(platform.directory.get_data_request(claims, request_id))

    @app.get("/api/requests/data-addition")
    def list_data_requests(
        state: str | None = None, claims: PrincipalClaims = Depends(current_claims)
    ):
        return [_data_request_doc(r) for r in platform.directory.list_data_requests(claims, state)]

    @app.post("/api/requests/examination", status_code=201)
    def request_examination(body: dict = Body(...), claims: PrincipalClaims = Depends(current_claims)):
        request = platform.directory.request_examination(claims, body.get("requested_type", ""))
        return _exam_request_doc(request)

    @app.post("/api/requests/examination/{request_id}/schedule")
    def schedule_examination(
        request_id: str, body: dict = Body(...), claims: PrincipalClaims = Depends(current_claims)
    ):
        admission = platform.directory.schedule_examination(
            claims, request_id, body.get("doctor_id", "")
        )
        return _admission_doc(admission)

    @app.get("/api/requests/examination")
    def list_examinations(
        state: str | None = None, claims: PrincipalClaims = Depends(current_claims)
    ):
        return [_exam_request_doc(r) for r in platform.directory.list_examination_requests(claims, state)]

    @app.get("/api/hospitals")
    def hospitals(claims: PrincipalClaims = Depends(current_claims)):
        return [
            {"hospital_id": h.hospital_id, "name": h.name, "region": h.region}
            for h in platform.directory.list_hospitals(claims)
        ]

    @app.post("/api/hospitals", status_code=201)
    def add_hospital(body: dict = Body(...), claims: PrincipalClaims = Depends(current_claims)):
        hospital_id = platform.directory.register_hospital(
            claims, name=body.get("name", ""), region=body.get("region", "")
        )
        return {"hospital_id": hospital_id}

    @app.post("/api/patients/{patient_id}/contacts", status_code=201)
    def add_contact(
        patient_id: str, body: dict = Body(...), claims: PrincipalClaims = Depends(current_claims)
    ):
        contact_id = platform.directory.assign_emergency_contact(
            claims, patient_id, name=body.get("name", ""), phone=body.get("phone", "")
        )
        return {"contact_id": contact_id}

    @app.get("/api/patients/{patient_id}/contacts")
    def list_contacts(patient_id: str, claims: PrincipalClaims = Depends(current_claims)):
        return [
            {"contact_id": c.contact_id, "name": c.name, "phone": c.phone}
            for c in platform.directory.contacts_for(claims, patient_id)
        ]

    # -- patient records (token forwarded into the pipeline) -------------------------

    @app.post("/api/records", status_code=201)
    def create_record(request: Request, body: dict = Body(...)):
        record = platform.records.create_record(
            raw_token(request), body.get("patient_id", ""), **_ctx(request)
        )
        return record.to_document()

    @app.get("/api/records/{patient_id}")
    def get_record(patient_id: str, request: Request):
        resolved = platform.records.get_record(raw_token(request), patient_id, **_ctx(request))
        return _resolved_doc(resolved)

    @app.post("/api/records/{patient_id}/visits", status_code=201)
    def create_visit(patient_id: str, request: Request, body: dict = Body(...)):
        visit_id = platform.records.create_visit(
            raw_token(request), patient_id, body, **_ctx(request)
        )
        return {"visit_id": visit_id}

    @app.get("/api/records/{patient_id}/visits")
    def list_visits(patient_id: str, request: Request):
        return platform.records.list_visits(raw_token(request), patient_id, **_ctx(request))

    @app.put("/api/records/{patient_id}/visits/{visit_id}")
    def update_visit(patient_id: str, visit_id: str, request: Request, body: dict = Body(...)):
        platform.records.update_visit(
            raw_token(request), patient_id, visit_id, body, **_ctx(request)
        )
        return {"visit_id": visit_id}

    @app.post("/api/records/{patient_id}/{kind}", status_code=201)
    def create_entity(patient_id: str, kind: str, request: Request, body: dict = Body(...)):
        entity_id = platform.records.upsert_entity(
            raw_token(request), patient_id, kind, body, **_ctx(request)
        )
        return {"entity_id": entity_id}

    @app.put("/api/records/{patient_id}/{kind}/{entity_id}")
    def update_entity(
        patient_id: str, kind: str, entity_id: str, request: Request, body: dict = Body(...)
    ):
        result = platform.records.upsert_entity(
            raw_token(request), patient_id, kind, body, entity_id=entity_id, **_ctx(request)
        )
        return {"entity_id": result}

    @app.delete("/api/records/{patient_id}/{kind}/{entity_id}", status_code=204)
    def delete_entity(patient_id: str, kind: str, entity_id: str, request: Request):
        platform.records.delete_entity(
            raw_token(request), patient_id, kind, entity_id, **_ctx(request)
        )
        return Response(status_code=204)

    # -- audit ------------------------------------------------------------------------

    @app.get("/api/audit")
    def audit_export(
        request: Request,
        actor_id: str | None = None,
        document_id: str | None = None,
        action: str | None = None,
        page: int = 0,
        page_size: int = 100,
        claims: PrincipalClaims = Depends(current_claims),
    ):
        entries = platform.audit.query(
            claims,
            actor_id=actor_id,
            document_id=document_id,
            action=action,
            page=page,
            page_size=page_size,
        )
        body = "\n".join(json.dumps(e.to_document(), sort_keys=True) for e in entries)
        return PlainTextResponse(body, media_type="application/x-ndjson")

    # -- AI workflows --------------------------------------------------------------------

    @app.post("/chat/initiate/")
    def chat_initiate(body: dict = Body(...), claims: PrincipalClaims = Depends(current_claims)):
        return platform.ai.chat_initiate(claims, body.get("user_input", ""))

    @app.post("/chat/continue/")
    def chat_continue(body: dict = Body(...), claims: PrincipalClaims = Depends(current_claims)):
        reply = platform.ai.chat_continue(
            claims, body.get("conversation_id", ""), body.get("user_input", "")
        )
        return {"bot_reply": reply}

    @app.get("/chats/")
    def chats(claims: PrincipalClaims = Depends(current_claims)):
        return platform.ai.list_conversations(claims)

    @app.get("/chat/{conversation_id}")
    def chat_history(conversation_id: str, claims: PrincipalClaims = Depends(current_claims)):
        log = platform.ai.get_conversation(claims, conversation_id)
        return {
            "conversation_id": log.conversation_id,
            "doctor_id": log.doctor_id,
            "created_at": iso_utc(log.created_at),
            "turns": [
                {"author": t.author, "content": t.content, "at": iso_utc(t.at)} for t in log.turns
            ],
        }

    @app.post("/api/ai/summarize/{patient_id}")
    def summarize(patient_id: str, claims: PrincipalClaims = Depends(current_claims)):
        result = platform.ai.summarize_history(claims, patient_id)
        return {
            "patient_id": result.patient_id,
            "summary_text": result.summary_text,
            "generated_at": iso_utc(result.generated_at),
            "source_record_version": result.source_record_version,
        }

    @app.post("/api/ai/report/{patient_id}/{visit_id}")
    def report(patient_id: str, visit_id: str, claims: PrincipalClaims = Depends(current_claims)):
        result = platform.ai.generate_report(claims, patient_id, visit_id)
        return {
            "report_id": result.report_id,
            "patient_id": result.patient_id,
            "visit_id": result.visit_id,
            "sections": result.sections,
            "storage_ref": result.storage_ref,
        }

    @app.post("/api/ai/xray/{patient_id}", status_code=201)
    async def classify_xray(
        patient_id: str,
        image: UploadFile = File(...),
        image_format: str = Form("png"),
        claims: PrincipalClaims = Depends(current_claims),
    ):
        data = await image.read()
        result = platform.ai.classify_xray(claims, patient_id, data, image_format)
        return _xray_doc(result)

    @app.post("/api/ai/xray/{result_id}/review")
    def review_xray(
        result_id: str, body: dict = Body(...), claims: PrincipalClaims = Depends(current_claims)
    ):
        result = platform.ai.review_xray(
            claims, result_id, body.get("verdict", ""), body.get("final_label")
        )
        return _xray_doc(result)

    @app.get("/api/ai/xray/history/{patient_id}")
    def xray_history(patient_id: str, claims: PrincipalClaims = Depends(current_claims)):
        return [_xray_doc(r) for r in platform.ai.xray_history(claims, patient_id)]

    # -- gateway health/introspection -------------------------------------------------------

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.get("/api/routes/{path:path}")
    def route_lookup(path: str):
        return {"upstream": resolve_upstream("/" + path)}

    return app


# -- serialization helpers ---------------------------------------------------


def _ctx(request: Request) -> dict:
    return {
        "source_ip": request.client.host if request.client else "unknown",
        "user_agent": request.headers.get("user-agent", "unknown"),
    }


def _bearer_token(request: Request) -> str | None:
    header = request.headers.get("authorization")
    if not header or not header.lower().startswith("bearer "):
        return None
    return header[7:].strip()


def _principal_for_rate_limit(platform: Platform, request: Request) -> str | None:
    token = _bearer_token(request)
    if token is None:
        return None
    try:
        return platform.identity.validate_token(token, platform.audience).subject
    except EhrError:
        return None


def _error_response(exc: EhrError) -> JSONResponse:
    body = {"error_kind": exc.error_kind, "detail": exc.detail}
    layer = getattr(exc, "layer", None)
    if layer is not None:
        body["layer"] = layer
    if isinstance(exc, RateLimitedError):
        return JSONResponse(body, status_code=exc.http_status, headers={"Retry-After": str(exc.retry_after)})
    return JSONResponse(body, status_code=exc.http_status)


def _admission_doc(admission) -> dict:
    return {
        "admission_id": admission.admission_id,
        "patient_id": admission.patient_id,
        "doctor_id": admission.doctor_id,
        "admitted_by": admission.admitted_by,
        "state": admission.state.value,
        "admitted_at": iso_utc(admission.admitted_at),
        "discharged_at": iso_utc(admission.discharged_at)
        if admission.state == AdmissionState.DISCHARGED
        else None,
    }


def _data_request_doc(request) -> dict:
    return {
        "request_id": request.request_id,
        "patient_id": request.patient_id,
        "data_type": request.data_type.value,
        "issuance_date": request.issuance_date,
        "document_ref": request.document_ref,
        "state": request.state.value,
        "reviewing_doctor": request.reviewing_doctor,
    }


def _exam_request_doc(request) -> dict:
    return {
        "request_id": request.request_id,
        "patient_id": request.patient_id,
        "requested_type": request.requested_type,
        "state": request.state.value,
        "resulting_admission": request.resulting_admission,
    }


def _resolved_doc(resolved) -> dict:
    from dataclasses import asdict

    return {
        "record": resolved.record.to_document(),
        "conditions": [asdict(c) for c in resolved.conditions],
        "medications": [asdict(m) for m in resolved.medications],
        "allergies": [asdict(a) for a in resolved.allergies],
        "surgeries": [asdict(s) for s in resolved.surgeries],
        "immunizations": [asdict(i) for i in resolved.immunizations],
        "lifestyle": asdict(resolved.lifestyle) if resolved.lifestyle else None,
        "visits": [asdict(v) for v in resolved.visits],
    }


def _xray_doc(result) -> dict:
    return {
        "result_id": result.result_id,
        "patient_id": result.patient_id,
        "image_ref": result.image_ref,
        "label": result.label,
        "confidence": result.confidence,
        "reviewer_verdict": result.reviewer_verdict,
        "reviewer_id": result.reviewer_id,
        "final_label": result.final_label,
    }
