from .log import ACTIONS, DEFAULT_RETENTION_SECONDS, AuditEntry, AuditLog

__all__ = ["ACTIONS", "DEFAULT_RETENTION_SECONDS", "AuditEntry", "AuditLog"]
