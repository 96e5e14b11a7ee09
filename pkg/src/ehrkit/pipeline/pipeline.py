"""Layered request processing for patient-record operations.

Every request traverses, in order: authentication, authorization, validation,
access control, audit. The first violated layer aborts the chain; later
security layers never run, and the executed sequence is always a prefix of
the full five-layer list. Audit emission is itself the fifth layer: exactly
one audit entry is appended per processed request, success or failure, and
a failed append fails the whole request.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

from ..audit.log import AuditLog
from ..errors import (
    AccessDeniedError,
    AuditWriteError,
    EhrError,
    ForbiddenError,
    UnauthorizedError,
    ValidationFailure,
)
from ..identity.permissions import Role, permissions_for_scopes
from ..identity.provider import IdentityProvider
from ..identity.tokens import PrincipalClaims
from .schemas import SchemaRegistry


class Layer(str, Enum):
    AUTHENTICATION = "authentication"
    AUTHORIZATION = "authorization"
    VALIDATION = "validation"
    ACCESS_CONTROL = "access_control"
    AUDIT = "audit"


LAYER_ORDER = (
    Layer.AUTHENTICATION,
    Layer.AUTHORIZATION,
    Layer.VALIDATION,
    Layer.ACCESS_CONTROL,
    Layer.AUDIT,
)


@dataclass(frozen=True)
class LayerOutcome:
    layer: Layer
    verdict: str  # "pass" | "fail"
    error_kind: str | None = None


@dataclass
class RequestContext:
    raw_token: str | None
    operation: str
    payload: dict
    target_patient: str | None
    source_ip: str = "127.0.0.1"
    user_agent: str = "ehrkit/0.1"
    claims: PrincipalClaims | None = None


@dataclass(frozen=True)
class OperationSpec:
    """What the pipeline needs to know about one record operation."""

    name: str
    required_permissions: tuple[str, ...]  # caller must hold any one of these
    schema_id: str
    action: str  # VIEW | CREATE | UPDATE | DELETE
    collection: str
    reason: str
    required_scope: str  # scope a service principal must hold


# Handlers receive the fully checked context and return (result, document_id).
Handler = Callable[[RequestContext], tuple[object, str]]
Observer = Callable[[RequestContext, OperationSpec, tuple[LayerOutcome, ...]], None]


class SecurityPipeline:
    def __init__(
        self,
        identity: IdentityProvider,
        audit: AuditLog,
        admission_active: Callable[[str, str], bool],
        schemas: SchemaRegistry | None = None,
        audience: str | None = None,
        observer: Observer | None = None,
    ):
        self._identity = identity
        self._audience = audience or identity.audience
        self._audit = audit
        self._admission_active = admission_active
        self._schemas = schemas or SchemaRegistry()
        self._observer = observer
        self._count_lock = threading.Lock()
        self._requests_processed = 0

    @property
    def requests_processed(self) -> int:
        return self._requests_processed

    # -- individual layers ---------------------------------------------------

    def authenticate_layer(self, ctx: RequestContext) -> RequestContext:
        if not ctx.raw_token:
            raise UnauthorizedError("missing token")
        ctx.claims = self._identity.validate_token(ctx.raw_token, self._audience)
        return ctx

    def authorize_layer(self, ctx: RequestContext, op: OperationSpec) -> None:
        claims = self._require_claims(ctx)
        effective = claims.permissions
        if claims.is_service:
            effective = effective | permissions_for_scopes(claims.scopes)
        if not any(p in effective for p in op.required_permissions):
            raise ForbiddenError("Forbidden: Insufficient permissions")

    def validate_layer(self, ctx: RequestContext, op: OperationSpec) -> None:
        self._require_claims(ctx)
        errors = self._schemas.validate(op.schema_id, ctx.payload)
        if errors:
            raise ValidationFailure(errors)

    def access_control_layer(self, ctx: RequestContext, op: OperationSpec) -> None:
        """Relationship check: assigned doctor, record owner, or a service
        whose scope covers the operation."""
        claims = self._require_claims(ctx)
        target = ctx.target_patient
        if claims.is_service:
            if op.required_scope in claims.scopes:
                return
            raise AccessDeniedError("service scope does not cover this operation")
        if target is None:
            raise AccessDeniedError("no target patient for this request")
        if claims.has_role(Role.PATIENT) and claims.subject == target:
            return
        if claims.has_role(Role.DOCTOR) and self._admission_active(claims.subject, target):
            return
        raise AccessDeniedError("no active admission or ownership for this patient")

    # -- composition -----------------------------------------------------------

    def process(self, ctx: RequestContext, op: OperationSpec, handler: Handler):
        with self._count_lock:
            self._requests_processed += 1
        trace: list[LayerOutcome] = []
        try:
            self._step(trace, Layer.AUTHENTICATION, lambda: self.authenticate_layer(ctx))
            self._step(trace, Layer.AUTHORIZATION, lambda: self.authorize_layer(ctx, op))
            self._step(trace, Layer.VALIDATION, lambda: self.validate_layer(ctx, op))
            self._step(trace, Layer.ACCESS_CONTROL, lambda: self.access_control_layer(ctx, op))
        except EhrError as exc:
            self._emit_audit(ctx, op, status="Failure", document_id=ctx.target_patient or "", error=exc)
            self._finish(ctx, op, trace, exc)
            raise
        try:
            result, document_id = handler(ctx)
        except EhrError as exc:
            trace.append(LayerOutcome(Layer.AUDIT, "pass"))
            self._emit_audit(ctx, op, status="Failure", document_id=ctx.target_patient or "", error=exc)
            self._finish(ctx, op, trace, exc)
            raise
        trace.append(LayerOutcome(Layer.AUDIT, "pass"))
        self._emit_audit(ctx, op, status="Success", document_id=document_id)
        self._finish(ctx, op, trace, None)
        return result

    # -- internals ----------------------------------------------------------------

    def _require_claims(self, ctx: RequestContext) -> PrincipalClaims:
        if ctx.claims is None:
            raise UnauthorizedError("layer ordering violated: claims missing")
        return ctx.claims

    def _step(self, trace: list[LayerOutcome], layer: Layer, run: Callable[[], object]) -> None:
        try:
            run()
        except EhrError as exc:
            trace.append(LayerOutcome(layer, "fail", exc.error_kind))
            exc.layer = layer.value  # type: ignore[attr-defined]
            raise
        trace.append(LayerOutcome(layer, "pass"))

    def _emit_audit(
        self,
        ctx: RequestContext,
        op: OperationSpec,
        *,
        status: str,
        document_id: str,
        error: EhrError | None = None,
    ) -> None:
        if error is None:
            reason = op.reason
        else:
            # Authentication causes stay distinguishable here and only here.
            detail = getattr(error, "audit_detail", error.detail)
            reason = f"{op.reason} (denied: {error.error_kind}: {detail})"
        actor = ctx.claims.subject if ctx.claims else "anonymous"
        try:
            self._audit.append(
                collection_name=op.collection,
                document_id=document_id,
                action=op.action,
                actor_id=actor,
                ip_address=ctx.source_ip,
                user_agent=ctx.user_agent,
                reason=reason,
                status=status,
            )
        except AuditWriteError:
            raise
        except Exception as exc:
            raise AuditWriteError(f"audit append failed: {exc}") from exc

    def _finish(
        self,
        ctx: RequestContext,
        op: OperationSpec,
        trace: list[LayerOutcome],
        error: EhrError | None,
    ) -> None:
        if error is not None:
            error.trace = tuple(trace)  # type: ignore[attr-defined]
        if self._observer:
            self._observer(ctx, op, tuple(trace))
