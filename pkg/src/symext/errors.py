"""Structured errors shared across the package."""

from __future__ import annotations


class SymextError(Exception):
    """Base class; carries a short machine-readable code plus details."""

    code = "error"

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.details = details


class DimensionMismatch(SymextError):
    code = "dimension-mismatch"


class NotSymmetricMatrix(SymextError):
    code = "not-symmetric"


class NotPositiveDefinite(SymextError):
    code = "not-positive-definite"


class GroupTooLarge(SymextError):
    code = "group-too-large"


class CapExceeded(SymextError):
    code = "cap-exceeded"


class InvalidInput(SymextError):
    code = "invalid-input"


class UnboundedInput(SymextError):
    code = "unbounded"


class InfeasibleInput(SymextError):
    code = "infeasible"


class InternalCheckFailed(SymextError):
    """An exact self-verification failed; indicates a bug, never bad data."""

    code = "internal-check-failed"
