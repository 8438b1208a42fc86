"""Exception hierarchy shared by every certquad module."""

from __future__ import annotations


class CertQuadError(Exception):
    """Base class for all certquad errors."""


class DomainError(CertQuadError, ValueError):
    """An argument lies outside the domain where a formula is valid."""


class DegenerateIntervalError(DomainError):
    """Raised where a zero-width interval makes the operation undefined."""


class SlopeConsistencyError(CertQuadError):
    """Declared slope bounds are falsified by the integrand's own endpoint values.

    ``cell`` is the offending composite cell index, or ``None`` for a
    single-interval rule.
    """

    def __init__(self, message: str, *, secant: float, bound: float, cell: int | None = None):
        super().__init__(message)
        self.secant = secant
        self.bound = bound
        self.cell = cell


class BudgetExceededError(CertQuadError):
    """Adaptive refinement ran out of cells before reaching the tolerance."""

    def __init__(self, message: str, *, partition, bound: float):
        super().__init__(message)
        self.partition = partition
        self.bound = bound


class InconsistentInputsError(CertQuadError):
    """The intersection of valid inequalities is empty: some hypothesis is violated."""
