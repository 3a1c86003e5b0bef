"""
Local structure of two-photon states: Schmidt angles and local unitaries,
{QWP, HWP, QWP} waveplate settings, and diagonal distillation filters.

Jones conventions: fast-axis angles are measured from horizontal and
QWP(t) = R(t) diag(e^{-i pi/4}, e^{i pi/4}) R(-t), HWP(t) = R(t) diag(-i, i) R(-t),
so both plates are special unitary.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Tuple

import numpy as np

from mixprep.constants import WAVEPLATE_TOL
from mixprep.utils.errors import DecompositionError, InfeasibleDesignError, InvalidInputError

from .density import IDENTITY_2, LocalUnitary, PureState

logger = logging.getLogger(__name__)

ANGLE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class SchmidtForm:
    theta: float
    u: LocalUnitary
    v: LocalUnitary
    phase: float

    def state(self) -> PureState:
        """e^{i phase} (u x v)(cos theta |HH> + sin theta |VV>)"""
        canonical = PureState.schmidt(self.theta).apply(self.u, self.v)
        return PureState(np.exp(1j * self.phase) * canonical.amplitudes)

    def residual(self, psi: PureState) -> float:
        return float(np.linalg.norm(self.state().amplitudes - psi.amplitudes))


def _special_unitary(matrix: np.ndarray) -> Tuple[np.ndarray, complex]:
    root = np.sqrt(complex(np.linalg.det(matrix)))
    return matrix / root, root


def _canonical_sign(matrix: np.ndarray) -> Tuple[np.ndarray, float]:
    """Flip the sign of an SU(2) matrix so its reference entry has phase in (-pi/2, pi/2]"""
    reference = matrix[0, 0] if abs(matrix[0, 0]) > ANGLE_TOL else matrix[1, 0]
    angle = np.angle(reference)
    if -np.pi / 2 < angle <= np.pi / 2:
        return matrix, 0.0
    return -matrix, np.pi


def schmidt_extract(psi: PureState) -> SchmidtForm:
    """
    Write psi as e^{i phase}(u x v)|Phi(theta)> with theta in [0, pi/4].

    The singular values of the 2x2 amplitude matrix are (cos theta, sin theta);
    determinant phases of both local unitaries are pushed into ``phase``.
    """
    left, singular, right_h = np.linalg.svd(psi.coefficient_matrix())
    theta = float(np.arctan2(singular[1], singular[0]))

    u, root_u = _special_unitary(left)
    v, root_v = _special_unitary(right_h.T)
    u, flip_u = _canonical_sign(u)
    v, flip_v = _canonical_sign(v)
    phase = float(np.mod(np.angle(root_u * root_v) + flip_u + flip_v, 2 * np.pi))
    return SchmidtForm(theta=theta, u=LocalUnitary(u), v=LocalUnitary(v), phase=phase)


def rotation(angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s], [s, c]], dtype=complex)


def retarder(angle: float, retardance: float) -> np.ndarray:
    core = np.diag([np.exp(-0.5j * retardance), np.exp(0.5j * retardance)])
    return rotation(angle) @ core @ rotation(-angle)


def qwp(angle: float) -> np.ndarray:
    return retarder(angle, np.pi / 2)


def hwp(angle: float) -> np.ndarray:
    return retarder(angle, np.pi)


def phase_insensitive_distance(a: np.ndarray, b: np.ndarray) -> float:
    """min over phi of ||a - e^{i phi} b||_F"""
    overlap = np.trace(b.conj().T @ a)
    phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    return float(np.linalg.norm(a - phase * b))


@dataclass(frozen=True)
class WaveplateTriple:
    """Fast-axis angles (radians) of the plates, in the order light meets them"""

    qwp1: float
    hwp: float
    qwp2: float

    def jones(self) -> np.ndarray:
        return qwp(self.qwp2) @ hwp(self.hwp) @ qwp(self.qwp1)

    def degrees(self) -> Tuple[float, float, float]:
        return tuple(float(np.degrees(a)) for a in (self.qwp1, self.hwp, self.qwp2))


def waveplate_decompose(u, tol: float = WAVEPLATE_TOL) -> WaveplateTriple:
    """
    Find QWP-HWP-QWP angles reproducing ``u`` up to global phase.

    QWP(t2) HWP(th) QWP(t1) reduces to R(t2) exp(i psi sigma_x) R(-t1) with
    psi = 2 th - t1 - t2, so the angles follow from the Y-X-Y Euler angles of
    the special-unitary part of ``u``. When one Euler angle is undetermined
    the first quarter-wave plate is fixed at 0.
    """
    target = u.matrix if isinstance(u, LocalUnitary) else LocalUnitary(u).matrix
    su, _ = _special_unitary(target)
    alpha, beta = su[0, 0], su[1, 0]

    cos_b = float(np.hypot(alpha.real, beta.real))
    sin_b = float(np.hypot(alpha.imag, beta.imag))
    b = float(np.arctan2(sin_b, cos_b))
    s = float(np.arctan2(beta.real, alpha.real)) if cos_b > ANGLE_TOL else None
    d = float(np.arctan2(alpha.imag, -beta.imag)) if sin_b > ANGLE_TOL else None
    if s is None:
        s = d
    if d is None:
        d = s
    a = (s + d) / 2
    c = (s - d) / 2

    triple = WaveplateTriple(
        qwp1=float(np.mod(-c, np.pi)),
        hwp=float(np.mod((a - b - c) / 2, np.pi)),
        qwp2=float(np.mod(a, np.pi)),
    )
    residual = phase_insensitive_distance(triple.jones(), target)
    if residual > tol:
        raise DecompositionError(f"Waveplate synthesis residual {residual:.3e} exceeds {tol:.1e}")
    return triple


class FilterDirection(str, Enum):
    RAISE = "raise"
    LOWER = "lower"


@dataclass(frozen=True)
class FilterSpec:
    """
    Diagonal amplitude filter diag(f_h, f_v) on photon A, designed to turn
    |Phi(theta_in)> into |Phi(theta_out)>.
    """

    f_h: float
    f_v: float
    success_prob: float
    theta_in: float
    theta_out: float

    def __post_init__(self):
        if not (0.0 <= self.f_h <= 1.0 and 0.0 <= self.f_v <= 1.0):
            raise InvalidInputError(f"Filter attenuations must lie in [0, 1], got ({self.f_h}, {self.f_v})")
        if abs(max(self.f_h, self.f_v) - 1.0) > ANGLE_TOL:
            raise InvalidInputError("Filter is not normalized to maximal transmission")
        if not 0.0 < self.success_prob <= 1.0:
            raise InvalidInputError(f"Filter success probability must lie in (0, 1], got {self.success_prob}")
        expected = (self.f_h * np.cos(self.theta_in)) ** 2 + (self.f_v * np.sin(self.theta_in)) ** 2
        if abs(expected - self.success_prob) > ANGLE_TOL:
            raise InvalidInputError(
                f"Declared success probability {self.success_prob} disagrees with the filter action {expected}"
            )

    @property
    def operator(self) -> np.ndarray:
        """Action on the two-photon space, filter on photon A"""
        return np.kron(np.diag([self.f_h, self.f_v]).astype(complex), IDENTITY_2)

    def apply(self, amplitudes: np.ndarray) -> Tuple[float, np.ndarray]:
        """Return (success probability, normalized filtered amplitudes)"""
        filtered = self.operator @ np.asarray(amplitudes, dtype=complex)
        success = float(np.vdot(filtered, filtered).real)
        if success <= 0:
            raise InfeasibleDesignError("Filter blocks the input state entirely")
        return success, filtered / np.sqrt(success)


def _check_angles(alpha: float, beta: float):
    if not (-ANGLE_TOL <= beta <= alpha + ANGLE_TOL and alpha <= np.pi / 4 + ANGLE_TOL):
        raise InvalidInputError(f"Need 0 <= beta <= alpha <= pi/4, got alpha={alpha}, beta={beta}")


def transformation_probabilities(alpha: float, beta: float) -> Tuple[float, float]:
    """(k1, k2): maximal probabilities of |Phi(beta)> -> |Phi(alpha)> and back"""
    _check_angles(alpha, beta)
    if abs(alpha - beta) <= ANGLE_TOL:
        return 1.0, 1.0
    k1 = float(np.sin(beta) ** 2 / np.sin(alpha) ** 2)
    k2 = float(np.cos(alpha) ** 2 / np.cos(beta) ** 2)
    return k1, k2


def design_filter(alpha: float, beta: float, direction: FilterDirection) -> FilterSpec:
    direction = FilterDirection(direction)
    _check_angles(alpha, beta)
    theta_in, theta_out = (beta, alpha) if direction == FilterDirection.RAISE else (alpha, beta)
    if abs(alpha - beta) <= ANGLE_TOL:
        return FilterSpec(f_h=1.0, f_v=1.0, success_prob=1.0, theta_in=theta_in, theta_out=theta_out)

    k1, k2 = transformation_probabilities(alpha, beta)
    ratio = float(np.tan(beta) / np.tan(alpha))
    if direction == FilterDirection.RAISE:
        if beta <= ANGLE_TOL:
            raise InfeasibleDesignError(
                f"Cannot raise a product state to Schmidt angle {alpha:.6f}: success probability is zero"
            )
        spec = FilterSpec(f_h=ratio, f_v=1.0, success_prob=k1, theta_in=beta, theta_out=alpha)
    else:
        spec = FilterSpec(f_h=1.0, f_v=ratio, success_prob=k2, theta_in=alpha, theta_out=beta)
    logger.debug(f"Designed {direction.value} filter {spec}")
    return spec
