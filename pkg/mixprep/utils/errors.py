from typing import Any, Optional, Sequence


class MixprepError(Exception):
    """Base class for every error raised by the preparation toolkit"""

    exit_code = 2


class InvalidInputError(MixprepError, ValueError):
    """A precondition on shapes, ranges or orderings was violated"""


class NonPhysicalStateError(InvalidInputError):
    """A matrix failed the density-matrix checks"""

    def __init__(self, message: str, report: Optional[Any] = None):
        super().__init__(message)
        self.report = report


class DecompositionError(MixprepError):
    """A numerical construction did not converge or failed its own round trip"""


class InfeasibleDesignError(MixprepError):
    """The requested state cannot be produced by the circuit"""

    exit_code = 3


class GeometryViolationError(MixprepError):
    """Path lengths or the coincidence window break the decoherence assumptions"""

    exit_code = 4

    def __init__(self, message: str, violations: Sequence[Any] = ()):
        super().__init__(message)
        self.violations = list(violations)
