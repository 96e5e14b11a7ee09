from .permissions import (
    ADMIN_PERMISSIONS,
    DOCTOR_PERMISSIONS,
    M2M_ONLY_PERMISSIONS,
    PATIENT_PERMISSIONS,
    PERMISSION_VOCABULARY,
    ROLE_PERMISSIONS,
    SCOPE_AUDIT_READ,
    SCOPE_RECORD_READ,
    SCOPE_RECORD_WRITE,
    Role,
    permissions_for_role,
    permissions_for_scopes,
)
from .provider import DEFAULT_AUDIENCE, IdentityProvider, ServiceCredential
from .tokens import (
    GRANT_CLIENT_CREDENTIALS,
    GRANT_PASSWORD,
    PrincipalClaims,
    TokenCodec,
)

__all__ = [
    "ADMIN_PERMISSIONS",
    "DEFAULT_AUDIENCE",
    "DOCTOR_PERMISSIONS",
    "GRANT_CLIENT_CREDENTIALS",
    "GRANT_PASSWORD",
    "IdentityProvider",
    "M2M_ONLY_PERMISSIONS",
    "PATIENT_PERMISSIONS",
    "PERMISSION_VOCABULARY",
    "PrincipalClaims",
    "ROLE_PERMISSIONS",
    "Role",
    "SCOPE_AUDIT_READ",
    "SCOPE_RECORD_READ",
    "SCOPE_RECORD_WRITE",
    "ServiceCredential",
    "TokenCodec",
    "permissions_for_role",
    "permissions_for_scopes",
]
