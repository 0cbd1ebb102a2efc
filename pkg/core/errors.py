"""
Exception hierarchy shared by every module of the lab.
"""


class LabError(Exception):
    """Base class for all lab errors."""


class DomainError(LabError, ValueError):
    """A parameter lies outside the domain of the requested operation."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class UnreachableThresholdError(DomainError):
    """A probability threshold lies above the maximum a curve can reach."""


class NumericError(LabError, ArithmeticError):
    """A computed quantity drifted outside its tolerance window."""


class QuadratureError(NumericError):
    """Adaptive quadrature did not reach the requested accuracy."""

    def __init__(self, message: str, estimate: float):
        self.estimate = estimate
        super().__init__(f"{message} (relative error estimate {estimate:.3e})")


class ResourceError(LabError, RuntimeError):
    """A run would exceed a step, size or I/O budget."""
