"""Audit trail for runs."""

from .logger import AuditEntry, AuditLogger

__all__ = ["AuditEntry", "AuditLogger"]
