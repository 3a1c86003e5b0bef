"""
Checks that the physical path layout justifies treating locations as
fully decohered and coincidence detection as path-index equality.
"""
import itertools
import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, Tuple

from mixprep.constants import DEFAULT_KAPPA, SPEED_OF_LIGHT
from mixprep.utils.errors import GeometryViolationError, InvalidInputError

logger = logging.getLogger(__name__)


class ViolationCode(str, Enum):
    MISMATCHED_ARM_LENGTH = "MISMATCHED_ARM_LENGTH"
    INDISTINGUISHABLE_PATHS = "INDISTINGUISHABLE_PATHS"
    WINDOW_TOO_WIDE = "WINDOW_TOO_WIDE"


@dataclass(frozen=True)
class Geometry:
    """Path lengths in meters, coherence lengths in meters, window in seconds"""

    lengths_a: Tuple[float, ...]
    lengths_b: Tuple[float, ...]
    l_coh: float
    l_pump: float
    window_t: float
    kappa: float = DEFAULT_KAPPA

    def __post_init__(self):
        lengths_a = tuple(float(x) for x in self.lengths_a)
        lengths_b = tuple(float(x) for x in self.lengths_b)
        if len(lengths_a) != len(lengths_b) or not 2 <= len(lengths_a) <= 4:
            raise InvalidInputError("Both arms need the same number (2 to 4) of path lengths")
        if min(lengths_a + lengths_b) <= 0:
            raise InvalidInputError("Path lengths must be positive")
        if self.l_coh < 0 or self.l_pump < 0:
            raise InvalidInputError("Coherence lengths cannot be negative")
        if self.window_t <= 0:
            raise InvalidInputError("The coincidence window must be positive")
        if self.kappa < 1:
            raise InvalidInputError(f"Distinguishability factor must be at least 1, got {self.kappa}")
        object.__setattr__(self, "lengths_a", lengths_a)
        object.__setattr__(self, "lengths_b", lengths_b)

    @property
    def window_length(self) -> float:
        return SPEED_OF_LIGHT * self.window_t


@dataclass(frozen=True)
class Violation:
    code: ViolationCode
    arm: str
    paths: Tuple[int, int]
    value: float
    limit: float

    @property
    def margin(self) -> float:
        """How far (meters) the geometry is on the wrong side of the limit"""
        if self.code == ViolationCode.INDISTINGUISHABLE_PATHS:
            return self.limit - self.value
        return self.value - self.limit

    @property
    def message(self) -> str:
        i, j = self.paths
        if self.code == ViolationCode.MISMATCHED_ARM_LENGTH:
            return (
                f"path {i}: arm lengths differ by {self.value:.6g} m, "
                f"not within the window length {self.limit:.6g} m"
            )
        if self.code == ViolationCode.INDISTINGUISHABLE_PATHS:
            return (
                f"arm {self.arm} paths {i},{j}: length difference {self.value:.6g} m "
                f"is below {self.limit:.6g} m"
            )
        return (
            f"arm {self.arm} paths {i},{j}: window length {self.value:.6g} m "
            f"is not shorter than the length difference {self.limit:.6g} m"
        )


def validate_geometry(geometry: Geometry) -> List[Violation]:
    """
    Return every violated condition, empty when the geometry is valid:
    matched arm lengths within the window, path differences of at least
    kappa coherence lengths, and a window shorter than every difference.
    """
    violations: List[Violation] = []
    window = geometry.window_length
    required = geometry.kappa * max(geometry.l_coh, geometry.l_pump)

    for index, (length_a, length_b) in enumerate(zip(geometry.lengths_a, geometry.lengths_b), start=1):
        mismatch = abs(length_a - length_b)
        if mismatch >= window:
            violations.append(Violation(ViolationCode.MISMATCHED_ARM_LENGTH, "AB", (index, index), mismatch, window))

    for arm, lengths in (("A", geometry.lengths_a), ("B", geometry.lengths_b)):
        for (i, length_i), (j, length_j) in itertools.combinations(enumerate(lengths, start=1), 2):
            delta = abs(length_i - length_j)
            if delta < required:
                violations.append(Violation(ViolationCode.INDISTINGUISHABLE_PATHS, arm, (i, j), delta, required))
            if window >= delta:
                violations.append(Violation(ViolationCode.WINDOW_TOO_WIDE, arm, (i, j), window, delta))

    if violations:
        logger.warning(f"Geometry has {len(violations)} violations: {sorted({v.code.value for v in violations})}")
    return violations


def enforce_geometry(geometry: Geometry) -> None:
    violations = validate_geometry(geometry)
    if violations:
        codes = ", ".join(sorted({v.code.value for v in violations}))
        raise GeometryViolationError(f"Geometry violates the decoherence conditions: {codes}", violations)
