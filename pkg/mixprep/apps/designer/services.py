import logging
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple, Union

import numpy as np

from mixprep.constants import CROSS_CHECK_TOL, RECONSTRUCTION_TOL
from mixprep.utils.errors import DecompositionError, InfeasibleDesignError, InvalidInputError
from mixprep.apps.circuits.simulator import PATHS, CircuitSpec, Layout, simulate
from mixprep.apps.states.density import DensityMatrix, LocalUnitary, PureState, ensure_density
from mixprep.apps.states.density import fidelity as state_fidelity
from mixprep.apps.states.entanglement import Decomposition, wootters_decompose
from mixprep.apps.states.local import (
    FilterDirection,
    SchmidtForm,
    WaveplateTriple,
    design_filter,
    schmidt_extract,
    transformation_probabilities,
    waveplate_decompose,
)

from .optimizer import (
    InitialState,
    choose_initial,
    mixing_ratio,
    optimal_general,
    optimal_two,
    path_probabilities,
)

logger = logging.getLogger(__name__)

Locals = Tuple[LocalUnitary, LocalUnitary]


@dataclass(frozen=True, eq=False)
class GeneralDesign:
    decomposition: Decomposition
    etas: Tuple[float, ...]
    f_optimal: float
    case_id: int
    theta: float
    forms: Tuple[SchmidtForm, ...]

    @property
    def weight_residual(self) -> float:
        """Largest gap between the normalized path probabilities and the branch weights"""
        probabilities = path_probabilities(self.etas)
        weights = np.pad(self.decomposition.weights, (0, 4 - len(self.decomposition)))
        return float(np.max(np.abs(probabilities / probabilities.sum() - weights)))


@dataclass(frozen=True)
class TwoStateDesign:
    alpha: float
    beta: float
    chosen_initial: InitialState
    eta12: float
    k1: float
    k2: float
    p_target: float
    success: float
    threshold: Optional[float] = None


def _check_decomposition(rho: DensityMatrix, decomposition: Decomposition) -> Decomposition:
    residual = decomposition.residual(rho)
    if residual > RECONSTRUCTION_TOL:
        raise InvalidInputError(f"Supplied decomposition does not reproduce the state (residual {residual:.3e})")
    return decomposition


def design_general(rho, decomposition: Optional[Decomposition] = None) -> Tuple[GeneralDesign, CircuitSpec]:
    """
    Design the four-path circuit preparing rho.

    Every branch of an equal-concurrence decomposition is a local rotation
    of one Schmidt state |Phi(theta)>, so the source emits that state and
    path i applies the rotations of branch i with probability matching its
    weight. A supplied decomposition replaces the Wootters one; its branches
    must still share a single Schmidt angle.
    """
    rho = ensure_density(rho)
    if decomposition is None:
        decomposition = wootters_decompose(rho)
    else:
        decomposition = _check_decomposition(rho, decomposition)

    forms = tuple(schmidt_extract(state) for state in decomposition.states)
    thetas = np.array([form.theta for form in forms])
    spread = float(thetas.max() - thetas.min())
    if spread > CROSS_CHECK_TOL:
        raise DecompositionError(f"Branches do not share one Schmidt angle (spread {spread:.3e})")
    theta = float(np.clip(thetas.mean(), 0.0, np.pi / 4))

    optimum = optimal_general(decomposition.weights)
    design = GeneralDesign(
        decomposition=decomposition,
        etas=optimum.etas,
        f_optimal=optimum.f_optimal,
        case_id=optimum.case_id,
        theta=theta,
        forms=forms,
    )
    if design.weight_residual > RECONSTRUCTION_TOL:
        raise DecompositionError(f"Path probabilities miss the weights by {design.weight_residual:.3e}")

    sprs = {path: (form.u, form.v) for path, form in zip(PATHS, forms)}
    circuit = CircuitSpec(etas=optimum.etas, theta0=theta, sprs=sprs, layout=Layout.FOUR_PATH)
    logger.info(f"General design: {len(forms)} branches, case {optimum.case_id}, F = {optimum.f_optimal:.12f}")
    return design, circuit


def _identity_locals() -> Locals:
    return LocalUnitary.identity(), LocalUnitary.identity()


def two_state_target(
    alpha: float, beta: float, p: float, first: Optional[Locals] = None, second: Optional[Locals] = None
) -> DensityMatrix:
    """p (U1 x V1)|Phi(alpha)><..| + (1 - p) (U2 x V2)|Phi(beta)><..|"""
    first = first or _identity_locals()
    second = second or _identity_locals()
    psi = PureState.schmidt(alpha).apply(*first)
    phi = PureState.schmidt(beta).apply(*second)
    return DensityMatrix.mixture([p, 1 - p], [psi, phi])


def design_two_state(
    alpha: float,
    beta: float,
    p: float,
    initial: Optional[InitialState] = None,
    first: Optional[Locals] = None,
    second: Optional[Locals] = None,
) -> Tuple[TwoStateDesign, CircuitSpec]:
    """
    Two-path design for p |psi><psi| + (1 - p) |phi><phi| with Schmidt
    angles alpha >= beta.

    Starting from |Phi(beta)>, path 1 raises the angle to alpha (success k1);
    starting from |Phi(alpha)>, path 2 lowers it to beta (success k2). The
    initial state is picked by threshold unless forced.
    """
    k1, k2 = transformation_probabilities(alpha, beta)
    a = mixing_ratio(p)
    first = first or _identity_locals()
    second = second or _identity_locals()
    forced = InitialState(initial) if initial is not None else None

    threshold = None
    if k1 > 0:
        chosen, threshold = choose_initial(k1, k2, p)
    else:
        chosen = InitialState.PHI_ALPHA
    if forced is not None:
        chosen = forced
    elif p == 1:
        chosen = InitialState.PHI_ALPHA
    elif p == 0:
        chosen = InitialState.PHI_BETA

    # At p == 0 path 1 is closed, so |Phi(0)> passes through unfiltered.
    if chosen == InitialState.PHI_BETA and k1 == 0 and p > 0:
        raise InfeasibleDesignError(
            f"Cannot start from the product state |Phi(0)>: raising it to alpha={alpha:.6f} never succeeds"
        )

    if p == 1 and chosen == InitialState.PHI_ALPHA:
        eta, success = 1.0, 1.0
    elif p == 0 and chosen == InitialState.PHI_BETA:
        eta, success = 0.0, 1.0
    elif p == 0:
        eta, success = 0.0, k2
    else:
        eta, success = optimal_two(k1, k2, a, chosen)

    filters = {}
    identical = k1 == 1.0 and k2 == 1.0
    if chosen == InitialState.PHI_BETA:
        theta0 = beta
        if not identical and eta > 0:
            filters[1] = design_filter(alpha, beta, FilterDirection.RAISE)
    else:
        theta0 = alpha
        if not identical and eta < 1:
            filters[2] = design_filter(alpha, beta, FilterDirection.LOWER)

    design = TwoStateDesign(
        alpha=alpha,
        beta=beta,
        chosen_initial=chosen,
        eta12=eta,
        k1=k1,
        k2=k2,
        p_target=p,
        success=success,
        threshold=threshold,
    )
    circuit = CircuitSpec(
        etas=(eta, eta, 1.0, 1.0, 1.0, 1.0),
        theta0=theta0,
        sprs={1: first, 2: second},
        filters=filters,
        layout=Layout.TWO_PATH,
    )
    logger.info(f"Two-state design: initial {chosen.value}, eta = {eta:.12f}, success = {success:.12f}")
    return design, circuit


@dataclass(frozen=True, eq=False)
class DesignReport:
    scheme: str
    design: Union[GeneralDesign, TwoStateDesign]
    circuit: CircuitSpec
    target: DensityMatrix
    simulated: DensityMatrix
    simulated_success: float
    predicted_success: float
    waveplates: Dict[int, Tuple[WaveplateTriple, WaveplateTriple]] = field(default_factory=dict)

    @property
    def fidelity(self) -> float:
        return state_fidelity(self.target, self.simulated)

    @property
    def fidelity_residual(self) -> float:
        return 1.0 - self.fidelity

    @property
    def success_residual(self) -> float:
        return abs(self.simulated_success - self.predicted_success)

    @property
    def state_residual(self) -> float:
        return self.target.frobenius_distance(self.simulated)


class PreparationDesigner:
    """Service for designing preparation circuits and checking them by simulation"""

    def __init__(self, coupler_efficiency: float = 1.0):
        if not 0.0 < coupler_efficiency <= 1.0:
            raise InvalidInputError(f"Coupler efficiency must lie in (0, 1], got {coupler_efficiency}")
        self.coupler_efficiency = coupler_efficiency

    def general(self, rho, decomposition: Optional[Decomposition] = None) -> DesignReport:
        rho = ensure_density(rho)
        design, circuit = design_general(rho, decomposition)
        return self._report("general", design, circuit, rho, design.f_optimal)

    def two_state(
        self,
        alpha: float,
        beta: float,
        p: float,
        initial: Optional[InitialState] = None,
        first: Optional[Locals] = None,
        second: Optional[Locals] = None,
    ) -> DesignReport:
        design, circuit = design_two_state(alpha, beta, p, initial, first, second)
        target = two_state_target(alpha, beta, p, first, second)
        return self._report("two-state", design, circuit, target, design.success)

    def _report(self, scheme, design, circuit: CircuitSpec, target: DensityMatrix, success: float) -> DesignReport:
        if self.coupler_efficiency != 1.0:
            circuit = CircuitSpec(
                etas=circuit.etas,
                theta0=circuit.theta0,
                sprs=circuit.sprs,
                filters=circuit.filters,
                coupler_efficiency=self.coupler_efficiency,
                layout=circuit.layout,
            )
        result = simulate(circuit)
        active = [path for path, weight in zip(PATHS, result.joint.coincidence_weights) if weight > 0]
        waveplates = {
            path: (waveplate_decompose(circuit.sprs[path][0]), waveplate_decompose(circuit.sprs[path][1]))
            for path in active
        }
        report = DesignReport(
            scheme=scheme,
            design=design,
            circuit=circuit,
            target=target,
            simulated=result.rho,
            simulated_success=result.success,
            predicted_success=success * self.coupler_efficiency,
            waveplates=waveplates,
        )
        if report.fidelity_residual > CROSS_CHECK_TOL or report.success_residual > CROSS_CHECK_TOL:
            logger.warning(
                f"Design cross-check is loose: fidelity residual {report.fidelity_residual:.3e}, "
                f"success residual {report.success_residual:.3e}"
            )
        return report

