"""
Exact simulation of the preparation circuit on polarization x location.

Each photon of the source pair |Phi(theta0)> is routed through a tree of
variable beam splitters into one of four paths. Path-length differences
larger than the coherence lengths erase all coherence between location
pairs, so the joint state is block diagonal over ordered pairs (i, j): a
weight p_ij times the polarization state (U_i x V_j) F_i |Phi(theta0)>,
F_i the optional filter on path i of photon A. Coincidence detection
keeps the blocks with i == j.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from types import MappingProxyType
from typing import Dict, Mapping, Sequence, Tuple

import numpy as np

from mixprep.constants import PHYSICAL_TOL
from mixprep.utils.errors import InfeasibleDesignError, InvalidInputError
from mixprep.apps.states.density import DensityMatrix, LocalUnitary, PureState
from mixprep.apps.states.local import FilterSpec

logger = logging.getLogger(__name__)

PATHS = (1, 2, 3, 4)
THETA_TOL = 1e-9


class Layout(str, Enum):
    FOUR_PATH = "four_path"
    TWO_PATH = "two_path"


def _check_eta(eta: float, name: str = "eta"):
    if not 0.0 <= eta <= 1.0:
        raise InvalidInputError(f"{name} must lie in [0, 1], got {eta}")


def apply_vbs(amplitudes: Sequence[complex], eta: float, mode_pair: Tuple[int, int]) -> np.ndarray:
    """
    Variable beam splitter of intensity transmission ``eta`` acting on two
    location modes: |a> -> sqrt(eta)|a> + sqrt(1 - eta)|b>.
    """
    _check_eta(eta)
    a, b = mode_pair
    if a == b:
        raise InvalidInputError("A beam splitter needs two distinct modes")
    amplitudes = np.array(amplitudes, dtype=complex)
    t, r = np.sqrt(eta), np.sqrt(1.0 - eta)
    mode_a, mode_b = amplitudes[a], amplitudes[b]
    amplitudes[a] = t * mode_a - r * mode_b
    amplitudes[b] = r * mode_a + t * mode_b
    return amplitudes


# Beam splitter index (0-based into etas) and mode pair, per photon, in the order light meets them.
_ROUTES = {
    Layout.FOUR_PATH: {
        "A": ((0, (0, 2)), (2, (0, 1)), (3, (2, 3))),
        "B": ((1, (0, 2)), (4, (0, 1)), (5, (2, 3))),
    },
    Layout.TWO_PATH: {
        "A": ((0, (0, 1)),),
        "B": ((1, (0, 1)),),
    },
}


def location_amplitudes(etas: Sequence[float], layout: "Layout", photon: str) -> np.ndarray:
    amplitudes = np.zeros(4, dtype=complex)
    amplitudes[0] = 1.0
    for eta_index, pair in _ROUTES[Layout(layout)][photon]:
        amplitudes = apply_vbs(amplitudes, etas[eta_index], pair)
    return amplitudes


@dataclass(frozen=True, eq=False)
class CircuitSpec:
    """
    Six intensity transmissions, per-path local rotations (u for photon A,
    v for photon B), optional filters on photon A, and the Schmidt angle of
    the source. Paths without a rotation get the identity.
    """

    etas: Tuple[float, ...]
    theta0: float
    sprs: Mapping[int, Tuple[LocalUnitary, LocalUnitary]] = field(default_factory=dict)
    filters: Mapping[int, FilterSpec] = field(default_factory=dict)
    coupler_efficiency: float = 1.0
    layout: Layout = Layout.FOUR_PATH

    def __post_init__(self):
        layout = Layout(self.layout)
        etas = tuple(float(e) for e in self.etas)
        if len(etas) != 6:
            raise InvalidInputError(f"A circuit has 6 beam splitters, got {len(etas)} transmissions")
        for index, eta in enumerate(etas, start=1):
            _check_eta(eta, f"eta{index}")
        if layout == Layout.TWO_PATH:
            etas = etas[:2] + (1.0, 1.0, 1.0, 1.0)
        if not -THETA_TOL <= self.theta0 <= np.pi / 4 + THETA_TOL:
            raise InvalidInputError(f"Source Schmidt angle must lie in [0, pi/4], got {self.theta0}")
        if not 0.0 < self.coupler_efficiency <= 1.0:
            raise InvalidInputError(f"Coupler efficiency must lie in (0, 1], got {self.coupler_efficiency}")

        sprs: Dict[int, Tuple[LocalUnitary, LocalUnitary]] = {}
        for path in PATHS:
            u, v = self.sprs.get(path, (LocalUnitary.identity(), LocalUnitary.identity()))
            sprs[path] = (u, v)
        unknown = (set(self.sprs) | set(self.filters)) - set(PATHS)
        if unknown:
            raise InvalidInputError(f"Unknown path indices {sorted(unknown)}")
        for path, spec in self.filters.items():
            if abs(spec.theta_in - self.theta0) > THETA_TOL:
                raise InvalidInputError(
                    f"Filter on path {path} expects Schmidt angle {spec.theta_in}, source has {self.theta0}"
                )

        object.__setattr__(self, "layout", layout)
        object.__setattr__(self, "etas", etas)
        object.__setattr__(self, "sprs", MappingProxyType(sprs))
        object.__setattr__(self, "filters", MappingProxyType(dict(self.filters)))

    def intensities(self) -> Tuple[np.ndarray, np.ndarray]:
        """Probabilities of photon A and photon B reaching each path"""
        a = np.abs(location_amplitudes(self.etas, self.layout, "A")) ** 2
        b = np.abs(location_amplitudes(self.etas, self.layout, "B")) ** 2
        return a, b


@dataclass(frozen=True, eq=False)
class JointState:
    """
    Block-diagonal state after decoherence: ``weights[i, j]`` is the
    probability of photon A on path i+1 and photon B on path j+1,
    ``blocks[i, j]`` the conditional polarization state (zero when the
    weight is zero).
    """

    weights: np.ndarray
    blocks: np.ndarray

    def __post_init__(self):
        weights = np.array(self.weights, dtype=float)
        blocks = np.array(self.blocks, dtype=complex)
        if weights.shape != (4, 4) or blocks.shape != (4, 4, 4, 4):
            raise InvalidInputError("Joint state needs 4x4 weights and 4x4 blocks of 4x4 operators")
        if np.any(weights < 0) or weights.sum() > 1 + PHYSICAL_TOL:
            raise InvalidInputError("Joint weights must be non-negative with total at most 1")
        weights.setflags(write=False)
        blocks.setflags(write=False)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "blocks", blocks)

    @property
    def survival(self) -> float:
        return float(self.weights.sum())

    @property
    def coincidence_weights(self) -> np.ndarray:
        return np.diag(self.weights).copy()


def evolve(circuit: CircuitSpec) -> JointState:
    a, b = circuit.intensities()
    source = PureState.schmidt(circuit.theta0).amplitudes

    survival = np.ones(4)
    filtered = [source] * 4
    for path, spec in circuit.filters.items():
        survival[path - 1], filtered[path - 1] = spec.apply(source)

    weights = np.zeros((4, 4))
    blocks = np.zeros((4, 4, 4, 4), dtype=complex)
    for i in range(4):
        for j in range(4):
            weight = a[i] * b[j] * survival[i] * circuit.coupler_efficiency
            if weight <= 0:
                continue
            u, _ = circuit.sprs[i + 1]
            _, v = circuit.sprs[j + 1]
            state = np.kron(u.matrix, v.matrix) @ filtered[i]
            weights[i, j] = weight
            blocks[i, j] = np.outer(state, state.conj())
    logger.debug(f"Evolved circuit, coincidence weights {np.diag(weights)}")
    return JointState(weights=weights, blocks=blocks)


def postselect_coincidence(joint: JointState) -> Tuple[DensityMatrix, float]:
    """Keep photon pairs found on equal paths; return the normalized state and F = sum p_ii"""
    diagonal = joint.coincidence_weights
    success = float(diagonal.sum())
    if success <= 0.0:
        raise InfeasibleDesignError("No photon pair survives coincidence post-selection (F = 0)")
    matrix = sum(diagonal[i] * joint.blocks[i, i] for i in range(4) if diagonal[i] > 0) / success
    return DensityMatrix((matrix + matrix.conj().T) / 2), success


@dataclass(frozen=True, eq=False)
class SimulationResult:
    rho: DensityMatrix
    success: float
    joint: JointState


def simulate(circuit: CircuitSpec) -> SimulationResult:
    joint = evolve(circuit)
    rho, success = postselect_coincidence(joint)
    logger.info(f"Simulated {circuit.layout.value} circuit: F = {success:.12f}")
    return SimulationResult(rho=rho, success=success, joint=joint)

