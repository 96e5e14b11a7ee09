"""Reference identity provider.

Issues user tokens (role plus the full permission set mapped from that role)
and machine-to-machine service tokens (client-credentials grant carrying
scopes). Validation is stateless; issuance is serialized per credential only
to rate the secret comparison.
"""

from __future__ import annotations

import hmac
import threading
from dataclasses import dataclass, field
from typing import Callable

from ..clock import Clock
from ..errors import AuthenticationError, IdentityError, ScopeError, UnauthorizedError
from .permissions import Role, permissions_for_role
from .tokens import GRANT_CLIENT_CREDENTIALS, GRANT_PASSWORD, PrincipalClaims, TokenCodec

DEFAULT_AUDIENCE = "ehr-api"


@dataclass
class ServiceCredential:
    client_id: str
    client_secret: str
    allowed_scopes: frozenset[str]

    def __repr__(self) -> str:  # the secret must never leak into logs
        return f"ServiceCredential(client_id={self.client_id!r}, scopes={sorted(self.allowed_scopes)})"


@dataclass
class IdentityProvider:
    """Self-contained issuer and validator for signed bearer tokens.

    ``principal_exists`` is the user-directory lookup hook: issuance for a
    principal the directory does not know is refused.
    """

    codec: TokenCodec
    clock: Clock
    audience: str = DEFAULT_AUDIENCE
    principal_exists: Callable[[str, Role], bool] = lambda principal_id, role: True
    _credentials: dict[str, ServiceCredential] = field(default_factory=dict)
    _issue_lock: threading.Lock = field(default_factory=threading.Lock)

    def register_service(self, credential: ServiceCredential) -> None:
        self._credentials[credential.client_id] = credential

    def issue_user_token(self, principal_id: str, role: Role, ttl: int) -> str:
        if role == Role.SERVICE:
            raise IdentityError("service principals use the client-credentials grant")
        if ttl <= 0:
            raise IdentityError("invalid ttl")
        if not self.principal_exists(principal_id, role):
            raise IdentityError(f"unknown principal: {principal_id}")
        now = int(self.clock.now())
        claims = PrincipalClaims(
            subject=principal_id,
            roles=frozenset({role}),
            permissions=permissions_for_role(role),
            audiences=(self.audience,),
            issued_at=now,
            expires_at=now + int(ttl),
            grant_type=GRANT_PASSWORD,
        )
        return self.codec.encode(claims)

    def issue_service_token(
        self, client_id: str, client_secret: str, requested_scopes: set[str], ttl: int = 3600
    ) -> str:
        with self._issue_lock:
            credential = self._credentials.get(client_id)
            secret_ok = credential is not None and hmac.compare_digest(
                credential.client_secret, client_secret
            )
        if not secret_ok:
            raise AuthenticationError("bad client credentials")
        assert credential is not None
        requested = frozenset(requested_scopes)
        disallowed = requested - credential.allowed_scopes
        if disallowed:
            raise ScopeError(f"scope not allowed: {', '.join(sorted(disallowed))}")
        now = int(self.clock.now())
        claims = PrincipalClaims(
            subject=client_id,
            roles=frozenset({Role.SERVICE}),
            permissions=frozenset(),
            audiences=(self.audience,),
            issued_at=now,
            expires_at=now + int(ttl),
            scopes=requested,
            grant_type=GRANT_CLIENT_CREDENTIALS,
        )
        return self.codec.encode(claims)

    def validate_token(self, token: str, expected_audience: str, now: float | None = None) -> PrincipalClaims:
        """Decode iff signature valid, unexpired, and audience matches.

        The three failure modes are indistinguishable to the caller; the
        precise cause travels only in the exception's audit detail.
        """
        claims = self.codec.decode(token)
        at = self.clock.now() if now is None else now
        if at >= claims.expires_at:
            raise UnauthorizedError("token expired")
        if expected_audience not in claims.audiences:
            raise UnauthorizedError("audience mismatch")
        return claims
