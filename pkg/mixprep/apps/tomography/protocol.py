"""
Nine-setting polarization tomography: every pair of the H/V, D/A and R/L
bases, four coincidence outcomes per setting. Counts are simulated with a
multinomial draw per setting and the state is recovered by linear
inversion of the Pauli correlations, then projected onto the physical set.
"""
import itertools
import logging
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

import numpy as np

from mixprep.constants import GENERATED_PHYSICAL_TOL
from mixprep.utils.errors import InvalidInputError
from mixprep.apps.states.density import IDENTITY_2, PAULI_X, PAULI_Y, PAULI_Z, DensityMatrix, ensure_density

logger = logging.getLogger(__name__)

CLIP_WARNING = 1e-3
OUTCOME_SIGNS = np.array([1, -1, -1, 1], dtype=float)


class Basis(str, Enum):
    HV = "H/V"
    DA = "D/A"
    RL = "R/L"

    @property
    def labels(self) -> Tuple[str, str]:
        return tuple(self.value.split("/"))

    @property
    def vectors(self) -> Tuple[np.ndarray, np.ndarray]:
        """Eigenvectors of the basis Pauli operator, +1 first"""
        h = np.array([1, 0], dtype=complex)
        v = np.array([0, 1], dtype=complex)
        if self == Basis.HV:
            return h, v
        if self == Basis.DA:
            return (h + v) / np.sqrt(2), (h - v) / np.sqrt(2)
        return (h + 1j * v) / np.sqrt(2), (h - 1j * v) / np.sqrt(2)

    @property
    def pauli(self) -> np.ndarray:
        return {Basis.HV: PAULI_Z, Basis.DA: PAULI_X, Basis.RL: PAULI_Y}[self]


@dataclass(frozen=True)
class MeasurementSetting:
    basis_a: Basis
    basis_b: Basis

    @property
    def id(self) -> str:
        return f"{self.basis_a.name}-{self.basis_b.name}"

    @property
    def outcome_labels(self) -> Tuple[str, ...]:
        return tuple(a + b for a, b in itertools.product(self.basis_a.labels, self.basis_b.labels))

    @cached_property
    def projectors(self) -> np.ndarray:
        """Four rank-one projectors, outcome order (++, +-, -+, --)"""
        projectors = []
        for a, b in itertools.product(self.basis_a.vectors, self.basis_b.vectors):
            state = np.kron(a, b)
            projectors.append(np.outer(state, state.conj()))
        return np.array(projectors)

    def probabilities(self, rho) -> np.ndarray:
        rho = ensure_density(rho)
        values = np.real(np.einsum("kij,ji->k", self.projectors, rho.matrix))
        values = np.clip(values, 0.0, None)
        return values / values.sum()


def standard_settings() -> Tuple[MeasurementSetting, ...]:
    return tuple(MeasurementSetting(a, b) for a, b in itertools.product(Basis, Basis))


def setting_by_id(setting_id: str) -> MeasurementSetting:
    for setting in standard_settings():
        if setting.id == setting_id:
            return setting
    raise InvalidInputError(f"Unknown measurement setting {setting_id!r}")


@dataclass(frozen=True)
class CountRecord:
    setting: str
    counts: Tuple[int, int, int, int]
    total: int
    seed: Optional[int] = None

    def __post_init__(self):
        setting_by_id(self.setting)
        counts = tuple(int(c) for c in self.counts)
        if len(counts) != 4 or min(counts) < 0:
            raise InvalidInputError(f"Setting {self.setting} needs 4 non-negative counts, got {self.counts}")
        if sum(counts) != self.total:
            raise InvalidInputError(f"Counts of {self.setting} sum to {sum(counts)}, declared total {self.total}")
        object.__setattr__(self, "counts", counts)

    @property
    def frequencies(self) -> np.ndarray:
        if self.total == 0:
            raise InvalidInputError(f"Setting {self.setting} has no counts")
        return np.asarray(self.counts, dtype=float) / self.total


def simulate_counts(rho, shots_per_setting: int, seed: Optional[int] = None) -> List[CountRecord]:
    """Multinomial coincidence counts for the nine settings, one derived generator per setting"""
    if shots_per_setting < 1:
        raise InvalidInputError(f"Need at least one shot per setting, got {shots_per_setting}")
    rho = ensure_density(rho)
    sequence = np.random.SeedSequence(seed)
    recorded_seed = seed if seed is not None else int(sequence.entropy)
    records = []
    for setting, child in zip(standard_settings(), sequence.spawn(9)):
        counts = np.random.default_rng(child).multinomial(shots_per_setting, setting.probabilities(rho))
        records.append(CountRecord(setting.id, tuple(int(c) for c in counts), shots_per_setting, recorded_seed))
    logger.debug(f"Simulated {shots_per_setting} shots for each of 9 settings (seed {recorded_seed})")
    return records


def exact_frequencies(rho) -> Dict[str, np.ndarray]:
    """Outcome probabilities of every setting, the infinite-shot limit of simulate_counts"""
    rho = ensure_density(rho)
    return {setting.id: setting.probabilities(rho) for setting in standard_settings()}


def record_frequencies(records: Iterable[CountRecord]) -> Dict[str, np.ndarray]:
    frequencies: Dict[str, np.ndarray] = {}
    for record in records:
        if record.setting in frequencies:
            raise InvalidInputError(f"Setting {record.setting} appears more than once")
        frequencies[record.setting] = record.frequencies
    return frequencies


def linear_inversion(frequencies: Mapping[str, np.ndarray]) -> np.ndarray:
    """
    rho = 1/4 sum T_mn sigma_m x sigma_n from measured correlations. Single
    photon expectations are averaged over the three settings sharing a basis.
    """
    missing = [s.id for s in standard_settings() if s.id not in frequencies]
    if missing:
        raise InvalidInputError(f"Incomplete tomography: missing settings {missing}")

    single_a: Dict[Basis, List[float]] = {basis: [] for basis in Basis}
    single_b: Dict[Basis, List[float]] = {basis: [] for basis in Basis}
    matrix = np.kron(IDENTITY_2, IDENTITY_2) / 4
    for setting in standard_settings():
        f = np.asarray(frequencies[setting.id], dtype=float)
        if f.shape != (4,) or abs(f.sum() - 1.0) > 1e-9:
            raise InvalidInputError(f"Frequencies of {setting.id} must be 4 values summing to 1")
        single_a[setting.basis_a].append(f[0] + f[1] - f[2] - f[3])
        single_b[setting.basis_b].append(f[0] - f[1] + f[2] - f[3])
        correlation = float(OUTCOME_SIGNS @ f)
        matrix = matrix + correlation * np.kron(setting.basis_a.pauli, setting.basis_b.pauli) / 4
    for basis in Basis:
        matrix = matrix + np.mean(single_a[basis]) * np.kron(basis.pauli, IDENTITY_2) / 4
        matrix = matrix + np.mean(single_b[basis]) * np.kron(IDENTITY_2, basis.pauli) / 4
    return (matrix + matrix.conj().T) / 2


def project_physical(matrix: np.ndarray) -> Tuple[np.ndarray, float]:
    """Clip negative eigenvalues and renormalize; also return the clipped mass"""
    values, vectors = np.linalg.eigh((matrix + matrix.conj().T) / 2)
    clipped_mass = float(-values[values < 0].sum())
    values = np.clip(values, 0.0, None)
    if values.sum() <= 0:
        raise InvalidInputError("Reconstruction has no positive part")
    values = values / values.sum()
    physical = (vectors * values) @ vectors.conj().T
    return (physical + physical.conj().T) / 2, clipped_mass


@dataclass(frozen=True, eq=False)
class Reconstruction:
    rho: DensityMatrix
    clipped_mass: float


def reconstruct_frequencies(frequencies: Mapping[str, np.ndarray]) -> Reconstruction:
    matrix, clipped_mass = project_physical(linear_inversion(frequencies))
    if clipped_mass > CLIP_WARNING:
        logger.warning(f"Clipped negative eigenvalue mass {clipped_mass:.3e} from the linear reconstruction")
    return Reconstruction(DensityMatrix(matrix, tol=GENERATED_PHYSICAL_TOL), clipped_mass)


def reconstruct(records: Iterable[CountRecord]) -> DensityMatrix:
    return reconstruct_frequencies(record_frequencies(records)).rho
