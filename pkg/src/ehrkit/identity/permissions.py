"""Roles, the closed permission vocabulary, and the role->permission map.

The mapping is a pure function of the role: two tokens issued for the same
role always carry identical permission sets.
"""

from __future__ import annotations

from enum import Enum


class Role(str, Enum):
    PATIENT = "patient"
    DOCTOR = "doctor"
    ADMIN = "admin"
    SERVICE = "service"


# Full clinical-data permission set granted to doctors (18 names).
DOCTOR_PERMISSIONS = frozenset({
    "createAllergy",
    "createCondition",
    "createMedication",
    "createRecord",
    "createSurgery",
    "createVisit",
    "deleteAllergy",
    "deleteCondition",
    "deleteMedication",
    "deleteSurgery",
    "deleteVisit",
    "getRecord",
    "getVisit",
    "updateAllergy",
    "updateCondition",
    "updateMedication",
    "updateSurgery",
    "updateVisit",
})

# Patients may view their own record and raise requests; they never edit
# clinical data themselves.
PATIENT_PERMISSIONS = frozenset({
    "getOwnRecord",
    "requestDataAddition",
    "requestExamination",
})

# Admins manage the admission lifecycle and registration only; they hold no
# clinical-data permissions at all.
ADMIN_PERMISSIONS = frozenset({
    "admitPatient",
    "dischargePatient",
    "registerPatient",
    "registerDoctor",
})

# Entity kinds the record supports but no user role may edit; the names are
# valid vocabulary so machine-to-machine writers can hold them via scope.
M2M_ONLY_PERMISSIONS = frozenset({
    "createImmunization",
    "updateImmunization",
    "deleteImmunization",
    "updateLifestyle",
})

PERMISSION_VOCABULARY = (
    DOCTOR_PERMISSIONS | PATIENT_PERMISSIONS | ADMIN_PERMISSIONS | M2M_ONLY_PERMISSIONS
)

ROLE_PERMISSIONS: dict[Role, frozenset[str]] = {
    Role.PATIENT: PATIENT_PERMISSIONS,
    Role.DOCTOR: DOCTOR_PERMISSIONS,
    Role.ADMIN: ADMIN_PERMISSIONS,
    Role.SERVICE: frozenset(),
}

# Service-token scopes and the permissions they imply when a service
# principal hits an endpoint that declares a required permission.
SCOPE_RECORD_READ = "record:read"
SCOPE_RECORD_WRITE = "record:write"
SCOPE_AUDIT_READ = "audit:read"

_READ_PERMISSIONS = frozenset({"getRecord", "getVisit"})
_MUTATION_PERMISSIONS = (DOCTOR_PERMISSIONS - _READ_PERMISSIONS) | M2M_ONLY_PERMISSIONS

SCOPE_PERMISSIONS: dict[str, frozenset[str]] = {
    SCOPE_RECORD_READ: _READ_PERMISSIONS,
    SCOPE_RECORD_WRITE: _MUTATION_PERMISSIONS,
}


def permissions_for_role(role: Role) -> frozenset[str]:
    return ROLE_PERMISSIONS[role]


def permissions_for_scopes(scopes: frozenset[str]) -> frozenset[str]:
    """Permissions a service principal effectively holds through its scopes."""
    implied: set[str] = set()
    for scope in scopes:
        implied |= SCOPE_PERMISSIONS.get(scope, frozenset())
    return frozenset(implied)
