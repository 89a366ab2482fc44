"""
Exception hierarchy for the FGM linear-exponential toolkit.

Domain violations subclass ValueError so callers that only know about
ValueError still catch them. Numerical failures carry enough state for
the CLI to print a useful diagnostic before exiting.
"""

from typing import Any


class FgmError(Exception):
    """Base class for every error raised by this package."""


class DomainError(FgmError, ValueError):
    """An argument lies outside the domain of the requested quantity."""


class ConfigError(FgmError, ValueError):
    """A run configuration violates its invariants."""


class NumericalError(FgmError):
    """A numerical procedure could not deliver a trustworthy result."""


class ToleranceNotMetError(NumericalError):
    """Quadrature exhausted its subdivision budget before meeting tolerance."""

    def __init__(self, message: str, estimate: float, error: float):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class ThinningBoundError(NumericalError):
    """A thinning proposal exceeded the majorizing intensity."""

    def __init__(self, point: tuple[float, float], intensity: float, bound: float):
        super().__init__(
            f"intensity {intensity:.6g} at ({point[0]:.6g}, {point[1]:.6g}) "
            f"exceeds majorant {bound:.6g}; the bound scan was insufficient"
        )
        self.point = point
        self.intensity = intensity
        self.bound = bound


class CurveInvariantError(NumericalError):
    """A grid curve violates the monotonicity or range invariant of its kind."""

    def __init__(self, message: str, index: int | None = None, detail: Any = None):
        super().__init__(message)
        self.index = index
        self.detail = detail
