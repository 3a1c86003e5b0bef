"""
Concurrence, entanglement of formation and the equal-concurrence
(Wootters) decomposition of a two-qubit density matrix.
"""
import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
from scipy.linalg import sqrtm
from scipy.special import entr

from mixprep.constants import (
    CROSS_CHECK_TOL,
    EQUALIZATION_MAX_ITER,
    EQUALIZATION_TOL,
    NORMALIZATION_TOL,
    PHYSICAL_TOL,
    RANK_CUTOFF,
    RECONSTRUCTION_TOL,
    SYMMETRIC_TOL,
    TAKAGI_CLUSTER_TOL,
    ZERO_WEIGHT,
)
from mixprep.utils.errors import DecompositionError, InvalidInputError

from .density import (
    PAULI_Y,
    DensityMatrix,
    PureState,
    as_complex_matrix,
    eig_hermitian,
    ensure_density,
    fix_phase,
    psd_sqrt,
)

logger = logging.getLogger(__name__)

SPIN_FLIP = np.kron(PAULI_Y, PAULI_Y)

_HADAMARD_4 = np.kron([[1, 1], [1, -1]], [[1, 1], [1, -1]]) / 2.0


@dataclass(frozen=True, eq=False)
class Branch:
    weight: float
    state: PureState


@dataclass(frozen=True, eq=False)
class Decomposition:
    """Pure-state ensemble sum p_i |psi_i><psi_i|, weights descending"""

    branches: Tuple[Branch, ...]

    def __post_init__(self):
        branches = tuple(self.branches)
        if not 1 <= len(branches) <= 4:
            raise InvalidInputError(f"A decomposition has 1 to 4 branches, got {len(branches)}")
        weights = np.array([b.weight for b in branches], dtype=float)
        if np.any(weights < 0) or np.any(weights > 1):
            raise InvalidInputError("Branch weights must lie in [0, 1]")
        if abs(weights.sum() - 1.0) > NORMALIZATION_TOL:
            raise InvalidInputError(f"Branch weights sum to {weights.sum():.12f}, not 1")
        if np.any(np.diff(weights) > NORMALIZATION_TOL):
            raise InvalidInputError("Branch weights must be sorted in descending order")
        object.__setattr__(self, "branches", branches)

    @classmethod
    def from_ensemble(cls, weights: Sequence[float], states: Sequence[PureState]) -> "Decomposition":
        """Build a decomposition from an unsorted ensemble; ties keep their input order"""
        weights = np.asarray(weights, dtype=float)
        order = np.argsort(-weights, kind="stable")
        return cls(tuple(Branch(float(weights[i]), states[i]) for i in order))

    @property
    def weights(self) -> np.ndarray:
        return np.array([b.weight for b in self.branches])

    @property
    def states(self) -> List[PureState]:
        return [b.state for b in self.branches]

    def __len__(self) -> int:
        return len(self.branches)

    def reconstruct(self) -> np.ndarray:
        return sum(b.weight * b.state.projector() for b in self.branches)

    def residual(self, rho) -> float:
        rho = ensure_density(rho)
        return float(np.linalg.norm(self.reconstruct() - rho.matrix))

    def branch_concurrences(self) -> np.ndarray:
        return np.array([pure_concurrence(b.state) for b in self.branches])


def spin_flip(rho) -> np.ndarray:
    """(sigma_y x sigma_y) rho* (sigma_y x sigma_y)"""
    rho = ensure_density(rho)
    return SPIN_FLIP @ rho.matrix.conj() @ SPIN_FLIP


def concurrence_spectrum(rho) -> np.ndarray:
    """Descending square roots of the eigenvalues of rho times its spin flip"""
    rho = ensure_density(rho)
    root = psd_sqrt(rho.matrix)
    product = root @ spin_flip(rho) @ root
    values = np.linalg.eigvalsh((product + product.conj().T) / 2)
    return np.sort(np.sqrt(np.clip(values, 0.0, None)))[::-1]


def concurrence(rho) -> float:
    lambdas = concurrence_spectrum(rho)
    return float(max(0.0, lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]))


def pure_concurrence(psi: PureState) -> float:
    """|<psi|spin-flipped psi>| for a normalized pure state"""
    amplitudes = psi.amplitudes
    return float(abs(amplitudes @ SPIN_FLIP @ amplitudes))


def eof_from_concurrence(c: float) -> float:
    """Entanglement of formation in ebits, h((1 + sqrt(1 - c^2)) / 2)"""
    if not -1e-12 <= c <= 1 + 1e-12:
        raise InvalidInputError(f"Concurrence must lie in [0, 1], got {c}")
    c = min(1.0, max(0.0, c))
    x = (1 + np.sqrt(1 - c * c)) / 2
    return float((entr(x) + entr(1 - x)) / np.log(2))


def _clusters(values: np.ndarray, tol: float) -> List[List[int]]:
    groups: List[List[int]] = []
    for index, value in enumerate(values):
        if groups and abs(values[groups[-1][-1]] - value) <= tol:
            groups[-1].append(index)
        else:
            groups.append([index])
    return groups


def takagi(tau, tol: float = SYMMETRIC_TOL) -> Tuple[np.ndarray, np.ndarray]:
    """
    Takagi factorization of a complex symmetric matrix.

    Returns ``(u, lambdas)`` with ``u`` unitary and ``u @ tau @ u.T`` equal to
    ``diag(lambdas)``, lambdas real, non-negative and descending.

    The factor is assembled from an SVD: inside each block of equal singular
    values the left and right singular vectors differ by a symmetric unitary,
    whose square root supplies the missing phases. The null block is taken
    straight from the right singular vectors.
    """
    tau = as_complex_matrix(tau)
    n, m = tau.shape
    if n != m:
        raise InvalidInputError(f"Takagi factorization needs a square matrix, got {n}x{m}")
    asymmetry = float(np.max(np.abs(tau - tau.T))) if n else 0.0
    if asymmetry > tol:
        raise InvalidInputError(f"Matrix is not symmetric (violation {asymmetry:.3e})")
    tau = (tau + tau.T) / 2

    left, singular, right_h = np.linalg.svd(tau)
    right = right_h.conj().T
    scale = max(1.0, float(singular[0])) if n else 1.0
    factor = np.zeros((n, n), dtype=complex)
    for indices in _clusters(singular, TAKAGI_CLUSTER_TOL * scale):
        if singular[indices[0]] <= TAKAGI_CLUSTER_TOL * scale:
            factor[:, indices] = right[:, indices].conj()
        else:
            z = left[:, indices].T @ right[:, indices]
            factor[:, indices] = left[:, indices] @ sqrtm(z).conj()

    residual = float(np.linalg.norm(factor @ np.diag(singular) @ factor.T - tau))
    if residual > RECONSTRUCTION_TOL * scale:
        raise DecompositionError(f"Takagi factorization residual {residual:.3e} exceeds tolerance")
    return factor.conj().T, singular


def _triangle(a: float, b: float, c: float, eps: float = 1e-15) -> Tuple[float, float]:
    """Angles (beta, gamma) with a + b e^{i beta} + c e^{i gamma} = 0"""
    if b <= eps and c <= eps:
        return 0.0, 0.0
    if b <= eps or a <= eps:
        return 0.0, np.pi
    if c <= eps:
        return np.pi, 0.0
    beta = float(np.arccos(np.clip((c * c - a * a - b * b) / (2 * a * b), -1.0, 1.0)))
    gamma = float(np.angle(-(a + b * np.exp(1j * beta))))
    return beta, gamma


def _closing_phases(lengths: Sequence[float]) -> np.ndarray:
    """Phases making sum l_j e^{i phi_j} vanish; needs l_1 >= l_2 >= ... and l_1 <= sum of the rest"""
    padded = list(lengths) + [0.0] * (4 - len(lengths))
    l1, l2, l3, l4 = padded
    combined = max(l1 - l2, l3 - l4)
    beta, gamma = _triangle(l1, l2, combined)
    beta3, gamma4 = _triangle(combined, l3, l4)
    phases = np.array([0.0, beta, gamma + beta3 + np.pi, gamma + gamma4 + np.pi])
    return phases[: len(lengths)]


def _preconcurrences(vectors: np.ndarray) -> np.ndarray:
    return vectors.T @ SPIN_FLIP @ vectors


def _equalize(
    vectors: np.ndarray, target: float, tol: float, max_iter: int
) -> np.ndarray:
    """
    Rotate pairs of subnormalized branches until every branch has
    preconcurrence equal to ``target`` times its weight.

    Each step takes the branch furthest above the target and the one furthest
    below and solves the real rotation angle that puts the first exactly on
    target. The total excess is invariant, so at most one branch per step is
    left off target.
    """
    vectors = vectors.copy()
    for iteration in range(max_iter + 1):
        tau = _preconcurrences(vectors).real
        gram = (vectors.conj().T @ vectors).real
        excess = np.diag(tau) - target * np.diag(gram)
        weights = np.diag(gram)
        deviation = np.where(weights > ZERO_WEIGHT, np.abs(excess) / np.maximum(weights, ZERO_WEIGHT), 0.0)
        if deviation.max() <= tol:
            logger.debug(f"Preconcurrences equalized after {iteration} rotations")
            return vectors
        if iteration == max_iter:
            break
        a = int(np.argmax(excess))
        b = int(np.argmin(excess))
        cross = tau[a, b] - target * gram[a, b]
        mean = (excess[a] + excess[b]) / 2
        half_gap = (excess[a] - excess[b]) / 2
        radius = float(np.hypot(half_gap, cross))
        if radius == 0.0:
            break
        angle = (np.arctan2(cross, half_gap) + np.arccos(np.clip(-mean / radius, -1.0, 1.0))) / 2
        column_a = np.cos(angle) * vectors[:, a] + np.sin(angle) * vectors[:, b]
        column_b = -np.sin(angle) * vectors[:, a] + np.cos(angle) * vectors[:, b]
        vectors[:, a] = column_a
        vectors[:, b] = column_b
    raise DecompositionError(
        f"Preconcurrence equalization did not converge in {max_iter} iterations "
        f"(max deviation {deviation.max():.3e}); the state is numerically degenerate"
    )


def wootters_decompose(
    rho,
    tol: float = EQUALIZATION_TOL,
    max_iter: int = EQUALIZATION_MAX_ITER,
) -> Decomposition:
    """
    Decompose rho into at most four pure states that all carry the
    concurrence of rho.

    Produces one branch per nonzero eigenvalue whenever the largest
    spin-flip value is at least the sum of the others, which covers every
    entangled rho and every separable rho of rank 1 or 2. Below that bound a
    rank-3 rho has no three-state product decomposition, so a separable rho
    of rank 3 or 4 there is spread over four product branches.
    """
    rho = ensure_density(rho, PHYSICAL_TOL)
    values, eigenvectors = eig_hermitian(rho)
    keep = values > RANK_CUTOFF
    subnormalized = eigenvectors[:, keep] * np.sqrt(values[keep])
    rank = subnormalized.shape[1]

    if rank == 1:
        return Decomposition((Branch(1.0, PureState.normalized(fix_phase(subnormalized[:, 0]))),))

    u, lambdas = takagi(_preconcurrences(subnormalized))
    vectors = subnormalized @ u.T
    slack = float(lambdas[0] - lambdas[1:].sum())
    target = max(0.0, slack)
    logger.debug(f"Decomposing rank-{rank} state, spin-flip spectrum {lambdas}, concurrence {target:.12f}")

    if slack >= -RANK_CUTOFF:
        phases = np.array([1.0] + [1j] * (rank - 1))
        vectors = _equalize(vectors * phases, target, tol, max_iter)
    else:
        vectors = vectors * np.exp(0.5j * _closing_phases(lambdas))
        vectors = vectors @ _HADAMARD_4[:rank, :]

    weights = np.real(np.einsum("ij,ij->j", vectors.conj(), vectors))
    kept = weights > ZERO_WEIGHT
    weights = weights[kept] / weights[kept].sum()
    states = [PureState.normalized(fix_phase(vectors[:, i])) for i in np.flatnonzero(kept)]
    decomposition = Decomposition.from_ensemble(weights, states)

    residual = decomposition.residual(rho)
    spread = float(np.max(np.abs(decomposition.branch_concurrences() - target)))
    if residual > RECONSTRUCTION_TOL or spread > CROSS_CHECK_TOL:
        raise DecompositionError(
            f"Decomposition failed its checks: reconstruction residual {residual:.3e}, "
            f"branch concurrence spread {spread:.3e}"
        )
    logger.info(f"Decomposed rank-{rank} state into {len(decomposition)} branches with concurrence {target:.6f}")
    return decomposition
