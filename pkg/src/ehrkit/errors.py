"""Shared exception hierarchy.

Every error that can cross a service boundary carries a machine-readable
``error_kind`` so HTTP handlers and audit entries never need to parse
message strings.
"""

from __future__ import annotations


class EhrError(Exception):
    """Base class for all domain errors."""

    error_kind = "error"
    http_status = 500

    def __init__(self, detail: str = ""):
        super().__init__(detail or self.error_kind)
        self.detail = detail or self.error_kind


class UnauthorizedError(EhrError):
    """Authentication failed. The public detail is deliberately generic;
    the precise cause (expiry, signature, audience) lives in ``audit_detail``
    and is only ever written to the audit trail."""

    error_kind = "unauthorized"
    http_status = 401

    def __init__(self, audit_detail: str = "unauthorized"):
        super().__init__("unauthorized")
        self.audit_detail = audit_detail


class ForbiddenError(EhrError):
    """Caller lacks a required permission."""

    error_kind = "forbidden"
    http_status = 403


class AccessDeniedError(EhrError):
    """Caller holds the permission but lacks the relationship
    (no active admission, not the record owner, scope too narrow)."""

    error_kind = "access_denied"
    http_status = 403


class ValidationFailure(EhrError):
    """Payload does not conform to the declared schema."""

    error_kind = "validation_error"
    http_status = 422

    def __init__(self, errors: list[str] | str):
        if isinstance(errors, str):
            errors = [errors]
        self.field_errors = list(errors)
        super().__init__("; ".join(self.field_errors))


class NotFoundError(EhrError):
    error_kind = "not_found"
    http_status = 404


class ConflictError(EhrError):
    error_kind = "conflict"
    http_status = 409


class IdentityError(EhrError):
    """Token issuance refused (unknown principal, bad ttl, wrong grant)."""

    error_kind = "identity_error"
    http_status = 401


class AuthenticationError(EhrError):
    """Client-credential check failed during service token issuance."""

    error_kind = "authentication_error"
    http_status = 401


class ScopeError(EhrError):
    """Requested scope is not allowed for the credential."""

    error_kind = "scope_error"
    http_status = 403


class RateLimitedError(EhrError):
    error_kind = "rate_limited"
    http_status = 429

    def __init__(self, retry_after: int):
        super().__init__(f"rate limit exceeded, retry after {retry_after}s")
        self.retry_after = retry_after


class UpstreamError(EhrError):
    """Routed upstream is unreachable or failing."""

    error_kind = "bad_gateway"
    http_status = 502


class UndefinedInputError(EhrError):
    """Operation is mathematically undefined for this input
    (empty sample set, zero-length reference, ...)."""

    error_kind = "undefined_input"
    http_status = 422


class ContractError(EhrError):
    """A pluggable client violated its interface contract."""

    error_kind = "contract_error"
    http_status = 500


class AuditWriteError(EhrError):
    """The mandatory audit append failed; the triggering request must fail."""

    error_kind = "audit_write_error"
    http_status = 500


class SetupError(EhrError):
    """A harness or scenario could not be started."""

    error_kind = "setup_error"
    http_status = 500
