"""
Two-photon polarization states in the {HH, HV, VH, VV} basis.

Every value type here is immutable: arrays are copied on construction and
marked read-only, so states can be shared freely between threads.
"""
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
from scipy.linalg import svdvals

from mixprep.constants import (
    NORMALIZATION_TOL,
    PHYSICAL_TOL,
    RANK_CUTOFF,
    SQRT_CUTOFF,
    UNITARY_TOL,
)
from mixprep.utils.errors import InvalidInputError, NonPhysicalStateError

logger = logging.getLogger(__name__)

IDENTITY_2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=complex, copy=True)
    array.setflags(write=False)
    return array


def as_complex_matrix(m, shape: Optional[Tuple[int, int]] = None) -> np.ndarray:
    """Coerce ``m`` to a dense finite complex matrix, optionally of a fixed shape"""
    try:
        matrix = np.asarray(m, dtype=complex)
    except (TypeError, ValueError) as e:
        raise InvalidInputError(f"Not a numeric matrix: {e}") from e
    if matrix.ndim != 2:
        raise InvalidInputError(f"Expected a 2-d matrix, got {matrix.ndim} dimensions")
    if shape is not None and matrix.shape != shape:
        raise InvalidInputError(f"Expected a {shape[0]}x{shape[1]} matrix, got {matrix.shape[0]}x{matrix.shape[1]}")
    if not np.all(np.isfinite(matrix)):
        raise InvalidInputError("Matrix has non-finite entries")
    return matrix


def fix_phase(vector: np.ndarray, cutoff: float = RANK_CUTOFF) -> np.ndarray:
    """Rotate the global phase so the first non-negligible component is real positive"""
    vector = np.asarray(vector, dtype=complex)
    for component in vector:
        if abs(component) > cutoff:
            return vector * (abs(component) / component)
    return vector


@dataclass(frozen=True, eq=False)
class PhysicalityReport:
    hermiticity: float
    trace_deviation: float
    psd_violation: float
    min_eigenvalue: float
    tol: float

    @property
    def ok(self) -> bool:
        return (
            self.hermiticity <= self.tol
            and self.trace_deviation <= self.tol
            and self.psd_violation <= self.tol
        )

    def __bool__(self) -> bool:
        return self.ok

    def violations(self) -> List[str]:
        found = []
        if self.hermiticity > self.tol:
            found.append(f"hermiticity violation {self.hermiticity:.3e}")
        if self.trace_deviation > self.tol:
            found.append(f"trace violation {self.trace_deviation:.3e}")
        if self.psd_violation > self.tol:
            found.append(f"PSD violation {self.psd_violation:.3e} (min eigenvalue {self.min_eigenvalue:.3e})")
        return found

    def as_dict(self) -> dict:
        return {
            "physical": self.ok,
            "hermiticity": self.hermiticity,
            "trace_deviation": self.trace_deviation,
            "psd_violation": self.psd_violation,
            "min_eigenvalue": self.min_eigenvalue,
            "tol": self.tol,
        }


def is_physical(m, tol: float = PHYSICAL_TOL) -> PhysicalityReport:
    """
    Check hermiticity, unit trace and positivity of a 4x4 matrix.

    Never raises for a 4x4 input; the returned report is truthy iff all three
    checks pass within ``tol`` and lists each violation magnitude otherwise.
    """
    matrix = np.asarray(m, dtype=complex)
    if matrix.shape != (4, 4):
        raise InvalidInputError(f"Expected a 4x4 matrix, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        return PhysicalityReport(np.inf, np.inf, np.inf, -np.inf, tol)

    hermiticity = float(np.max(np.abs(matrix - matrix.conj().T)))
    trace_deviation = float(abs(np.trace(matrix) - 1.0))
    hermitian_part = (matrix + matrix.conj().T) / 2
    min_eigenvalue = float(np.linalg.eigvalsh(hermitian_part)[0])
    return PhysicalityReport(
        hermiticity=hermiticity,
        trace_deviation=trace_deviation,
        psd_violation=max(0.0, -min_eigenvalue),
        min_eigenvalue=min_eigenvalue,
        tol=tol,
    )


@dataclass(frozen=True, eq=False)
class LocalUnitary:
    matrix: np.ndarray

    def __post_init__(self):
        matrix = as_complex_matrix(self.matrix, (2, 2))
        residual = np.max(np.abs(matrix.conj().T @ matrix - IDENTITY_2))
        if residual > UNITARY_TOL:
            raise InvalidInputError(f"Matrix is not unitary (residual {residual:.3e})")
        object.__setattr__(self, "matrix", _frozen(matrix))

    @classmethod
    def identity(cls) -> "LocalUnitary":
        return cls(IDENTITY_2)

    def dagger(self) -> "LocalUnitary":
        return LocalUnitary(self.matrix.conj().T)


@dataclass(frozen=True, eq=False)
class PureState:
    amplitudes: np.ndarray

    def __post_init__(self):
        amplitudes = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amplitudes.shape != (4,):
            raise InvalidInputError(f"Pure state needs 4 amplitudes, got {amplitudes.shape[0]}")
        if not np.all(np.isfinite(amplitudes)):
            raise InvalidInputError("Pure state has non-finite amplitudes")
        norm = float(np.vdot(amplitudes, amplitudes).real)
        if abs(norm - 1.0) > NORMALIZATION_TOL:
            raise InvalidInputError(f"Pure state is not normalized (norm^2 = {norm:.12f})")
        object.__setattr__(self, "amplitudes", _frozen(amplitudes))

    @classmethod
    def normalized(cls, amplitudes) -> "PureState":
        amplitudes = np.asarray(amplitudes, dtype=complex).reshape(-1)
        norm = np.linalg.norm(amplitudes)
        if norm == 0:
            raise InvalidInputError("Cannot normalize the zero vector")
        return cls(amplitudes / norm)

    @classmethod
    def schmidt(cls, theta: float) -> "PureState":
        """cos(theta)|HH> + sin(theta)|VV>"""
        return cls(np.array([np.cos(theta), 0, 0, np.sin(theta)], dtype=complex))

    def coefficient_matrix(self) -> np.ndarray:
        """Amplitudes as M[j, k] with psi = sum M[j, k] |j>_A |k>_B"""
        return np.asarray(self.amplitudes).reshape(2, 2)

    def projector(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def density(self) -> "DensityMatrix":
        return DensityMatrix(self.projector())

    def overlap(self, other: "PureState") -> float:
        """|<self|other>|^2"""
        return float(abs(np.vdot(self.amplitudes, other.amplitudes)) ** 2)

    def apply(self, u: LocalUnitary, v: LocalUnitary) -> "PureState":
        return PureState(np.kron(u.matrix, v.matrix) @ self.amplitudes)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    matrix: np.ndarray
    tol: float = field(default=PHYSICAL_TOL, repr=False)

    def __post_init__(self):
        matrix = as_complex_matrix(self.matrix, (4, 4))
        report = is_physical(matrix, self.tol)
        if not report:
            raise NonPhysicalStateError("Not a density matrix: " + "; ".join(report.violations()), report)
        object.__setattr__(self, "matrix", _frozen(matrix))

    @classmethod
    def maximally_mixed(cls) -> "DensityMatrix":
        return cls(np.eye(4, dtype=complex) / 4)

    @classmethod
    def werner(cls, p: float) -> "DensityMatrix":
        """p|Phi+><Phi+| + (1 - p) I/4"""
        if not 0.0 <= p <= 1.0:
            raise InvalidInputError(f"Werner weight must be in [0, 1], got {p}")
        bell = PureState.schmidt(np.pi / 4).projector()
        return cls(p * bell + (1 - p) * np.eye(4) / 4)

    @classmethod
    def mixture(cls, weights, states, tol: float = PHYSICAL_TOL) -> "DensityMatrix":
        matrix = sum(w * s.projector() for w, s in zip(weights, states))
        return cls(matrix, tol=tol)

    @property
    def purity(self) -> float:
        return float(np.trace(self.matrix @ self.matrix).real)

    def rank(self, cutoff: float = RANK_CUTOFF) -> int:
        return int(np.sum(np.linalg.eigvalsh(self.matrix) > cutoff))

    def conjugated(self, u: LocalUnitary, v: LocalUnitary) -> "DensityMatrix":
        """(u x v) rho (u x v)^dagger"""
        w = np.kron(u.matrix, v.matrix)
        return DensityMatrix(w @ self.matrix @ w.conj().T, tol=self.tol)

    def frobenius_distance(self, other) -> float:
        other_matrix = other.matrix if isinstance(other, DensityMatrix) else np.asarray(other)
        return float(np.linalg.norm(self.matrix - other_matrix))


def ensure_density(rho, tol: float = PHYSICAL_TOL) -> DensityMatrix:
    if isinstance(rho, DensityMatrix):
        return rho
    return DensityMatrix(as_complex_matrix(rho, (4, 4)), tol=tol)


def eig_hermitian(m, tol: float = PHYSICAL_TOL) -> Tuple[np.ndarray, np.ndarray]:
    """
    Eigen-decomposition of a Hermitian 4x4 matrix.

    Returns eigenvalues in descending order and the matching orthonormal
    eigenvectors as columns, each with its first non-negligible component
    made real positive.
    """
    matrix = m.matrix if isinstance(m, DensityMatrix) else as_complex_matrix(m, (4, 4))
    hermiticity = float(np.max(np.abs(matrix - matrix.conj().T)))
    if hermiticity > tol:
        raise InvalidInputError(f"Matrix is not Hermitian (violation {hermiticity:.3e})")
    values, vectors = np.linalg.eigh((matrix + matrix.conj().T) / 2)
    values = values[::-1].copy()
    vectors = vectors[:, ::-1]
    vectors = np.column_stack([fix_phase(vectors[:, i]) for i in range(vectors.shape[1])])
    return values, vectors


def psd_sqrt(matrix: np.ndarray, cutoff: float = SQRT_CUTOFF) -> np.ndarray:
    """Principal square root of a Hermitian PSD matrix; eigenvalues below cutoff * max count as zero"""
    values, vectors = np.linalg.eigh((matrix + matrix.conj().T) / 2)
    values = np.where(values > cutoff * max(float(values.max()), 0.0), values, 0.0)
    roots = np.sqrt(values)
    return (vectors * roots) @ vectors.conj().T


def fidelity(a, b) -> float:
    """Uhlmann fidelity, as the squared trace norm of sqrt(a) sqrt(b); symmetric in a and b"""
    a = ensure_density(a)
    b = ensure_density(b)
    value = float(svdvals(psd_sqrt(a.matrix) @ psd_sqrt(b.matrix)).sum() ** 2)
    return min(1.0, max(0.0, value))


def random_density(rank: int, seed: Optional[int] = None) -> DensityMatrix:
    """Random density matrix of exactly ``rank`` from a Ginibre draw"""
    if rank not in (1, 2, 3, 4):
        raise InvalidInputError(f"Rank must be between 1 and 4, got {rank}")
    rng = np.random.default_rng(seed)
    for _ in range(16):
        ginibre = rng.normal(size=(4, rank)) + 1j * rng.normal(size=(4, rank))
        matrix = ginibre @ ginibre.conj().T
        matrix = matrix / np.trace(matrix).real
        matrix = (matrix + matrix.conj().T) / 2
        if int(np.sum(np.linalg.eigvalsh(matrix) > RANK_CUTOFF)) == rank:
            return DensityMatrix(matrix)
    raise InvalidInputError(f"Could not draw a rank-{rank} state")


def random_hermitian(seed: Optional[int] = None) -> np.ndarray:
    rng = np.random.default_rng(seed)
    g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    return (g + g.conj().T) / 2
