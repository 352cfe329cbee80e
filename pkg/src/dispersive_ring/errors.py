"""Exception hierarchy.

Every error carries an ``exit_code`` so the command-line front end can map
failures onto its documented exit statuses without a lookup table.
"""

from __future__ import annotations


class DispersiveRingError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class ParameterError(DispersiveRingError, ValueError):
    """A physical parameter is outside its allowed domain."""

    exit_code = 2

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class PhysicsDomainError(DispersiveRingError):
    """The requested regime is outside the validity of the model."""

    exit_code = 3


class ModelBreakdownError(PhysicsDomainError):
    """Susceptibility too strong for the dilute-medium index (1 + Re chi <= 0)."""


class AboveThresholdError(PhysicsDomainError):
    """Round-trip gain reaches or exceeds loss; the passive model is invalid."""


class FormulaDomainError(PhysicsDomainError):
    """An arcsin argument in the linewidth formula left [-1, 1]."""


class CadDivergenceError(PhysicsDomainError):
    """The linear shift formula has a vanishing denominator."""


class SolverError(DispersiveRingError):
    """A numerical procedure failed to produce an answer."""

    exit_code = 4


class BracketError(SolverError, ValueError):
    """Root-finding bracket does not enclose a sign change."""


class SolverRangeError(SolverError):
    """No root of the self-consistent shift equation within the search range."""


class CalibrationError(SolverError):
    """Calibration could not meet its targets inside the search box."""

    def __init__(self, message: str, best_residual: float):
        self.best_residual = best_residual
        super().__init__(f"{message} (best residual {best_residual:.3g})")


class ExtractionError(SolverError):
    """Peak or half-maximum extraction failed on a sampled curve."""

    def __init__(self, message: str, side: str | None = None):
        self.side = side
        super().__init__(message)


class WindowTooNarrowError(ExtractionError):
    """The sampled window does not contain a complete resonance."""


class DegenerateFitError(SolverError, ValueError):
    """Least-squares fit has no information (all abscissae zero)."""
