"""Signed bearer token codec.

Standard three-part format: base64url(header).base64url(payload).signature,
signed with HMAC-SHA256 under a single symmetric key. Payload claim names
follow the conventional wire vocabulary: sub, user_roles, permissions, aud,
iat, exp, scope, gty. User tokens never carry a scope claim; service tokens
never carry user_roles or permissions.
"""

from __future__ import annotations

import base64
import hashlib
import hmac
import json
from dataclasses import dataclass, field

from ..errors import UnauthorizedError
from .permissions import Role

GRANT_PASSWORD = "password"
GRANT_CLIENT_CREDENTIALS = "client_credentials"


@dataclass(frozen=True)
class PrincipalClaims:
    """Decoded token payload."""

    subject: str
    roles: frozenset[Role]
    permissions: frozenset[str]
    audiences: tuple[str, ...]
    issued_at: int
    expires_at: int
    scopes: frozenset[str] = field(default_factory=frozenset)
    grant_type: str = GRANT_PASSWORD

    def has_role(self, role: Role) -> bool:
        return role in self.roles

    @property
    def is_service(self) -> bool:
        return self.grant_type == GRANT_CLIENT_CREDENTIALS


def _b64url(data: bytes) -> str:
    return base64.urlsafe_b64encode(data).rstrip(b"=").decode("ascii")


def _b64url_decode(segment: str) -> bytes:
    padding = "=" * (-len(segment) % 4)
    return base64.urlsafe_b64decode(segment + padding)


def _canonical(obj: dict) -> bytes:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")).encode("utf-8")


class TokenCodec:
    """Encodes and decodes claims under one signing key."""

    def __init__(self, signing_key: bytes | str):
        if isinstance(signing_key, str):
            signing_key = signing_key.encode("utf-8")
        if not signing_key:
            raise ValueError("signing key must be nonempty")
        self._key = signing_key

    def _sign(self, message: bytes) -> str:
        return _b64url(hmac.new(self._key, message, hashlib.sha256).digest())

    def encode(self, claims: PrincipalClaims) -> str:
        header = {"alg": "HS256", "typ": "JWT"}
        payload: dict = {
            "sub": claims.subject,
            "aud": list(claims.audiences),
            "iat": claims.issued_at,
            "exp": claims.expires_at,
            "gty": claims.grant_type,
        }
        if claims.grant_type == GRANT_CLIENT_CREDENTIALS:
            payload["scope"] = " ".join(sorted(claims.scopes))
        else:
            payload["user_roles"] = sorted(r.value for r in claims.roles)
            payload["permissions"] = sorted(claims.permissions)
        head = _b64url(_canonical(header))
        body = _b64url(_canonical(payload))
        signature = self._sign(f"{head}.{body}".encode("ascii"))
        return f"{head}.{body}.{signature}"

    def decode(self, token: str) -> PrincipalClaims:
        """Verify the signature and rebuild claims. Raises UnauthorizedError
        on any structural or signature defect; expiry and audience are the
        caller's concern (they need a clock and an expected audience)."""
        if not token or token.count(".") != 2:
            raise UnauthorizedError("malformed token")
        head, body, signature = token.split(".")
        expected = self._sign(f"{head}.{body}".encode("ascii"))
        if not hmac.compare_digest(signature, expected):
            raise UnauthorizedError("bad signature")
        try:
            payload = json.loads(_b64url_decode(body))
        except (ValueError, json.JSONDecodeError) as exc:
            raise UnauthorizedError("undecodable payload") from exc
        try:
            grant = payload["gty"]
            if grant == GRANT_CLIENT_CREDENTIALS:
                roles = frozenset({Role.SERVICE})
                permissions: frozenset[str] = frozenset()
                scopes = frozenset(payload.get("scope", "").split()) if payload.get("scope") else frozenset()
            else:
                roles = frozenset(Role(r) for r in payload["user_roles"])
                permissions = frozenset(payload["permissions"])
                scopes = frozenset()
            return PrincipalClaims(
                subject=payload["sub"],
                roles=roles,
                permissions=permissions,
                audiences=tuple(payload["aud"]),
                issued_at=int(payload["iat"]),
                expires_at=int(payload["exp"]),
                scopes=scopes,
                grant_type=grant,
            )
        except (KeyError, ValueError, TypeError) as exc:
            raise UnauthorizedError("malformed claims") from exc
