from typing import Dict, List, Optional

from pydantic import BaseModel

from mixprep.apps.circuits.schemas import CircuitSpecPayload
from mixprep.apps.states.schemas import DecompositionPayload, DensityMatrixPayload, WaveplateTriplePayload

from .optimizer import InitialState
from .services import DesignReport, GeneralDesign, TwoStateDesign


class GeneralDesignPayload(BaseModel):
    decomposition: DecompositionPayload
    etas: List[float]
    f_optimal: float
    case_id: int
    theta0: float

    @classmethod
    def from_domain(cls, design: GeneralDesign) -> "GeneralDesignPayload":
        return cls(
            decomposition=DecompositionPayload.from_domain(design.decomposition),
            etas=list(design.etas),
            f_optimal=design.f_optimal,
            case_id=design.case_id,
            theta0=design.theta,
        )


class TwoStateDesignPayload(BaseModel):
    alpha: float
    beta: float
    chosen_initial: InitialState
    eta12: float
    k1: float
    k2: float
    p_target: float
    success: float
    threshold: Optional[float] = None

    @classmethod
    def from_domain(cls, design: TwoStateDesign) -> "TwoStateDesignPayload":
        return cls(
            alpha=design.alpha,
            beta=design.beta,
            chosen_initial=design.chosen_initial,
            eta12=design.eta12,
            k1=design.k1,
            k2=design.k2,
            p_target=design.p_target,
            success=design.success,
            threshold=design.threshold,
        )


class PathWaveplatesPayload(BaseModel):
    u: WaveplateTriplePayload
    v: WaveplateTriplePayload


class SimulationCheckPayload(BaseModel):
    rho: DensityMatrixPayload
    F: float
    predicted_F: float
    fidelity: float
    fidelity_residual: float
    success_residual: float
    state_residual: float


class DesignReportPayload(BaseModel):
    scheme: str
    general: Optional[GeneralDesignPayload] = None
    two_state: Optional[TwoStateDesignPayload] = None
    circuit: CircuitSpecPayload
    waveplates: Dict[int, PathWaveplatesPayload]
    simulation: SimulationCheckPayload

    @classmethod
    def from_domain(cls, report: DesignReport) -> "DesignReportPayload":
        design = report.design
        fidelity = report.fidelity
        return cls(
            scheme=report.scheme,
            general=GeneralDesignPayload.from_domain(design) if isinstance(design, GeneralDesign) else None,
            two_state=TwoStateDesignPayload.from_domain(design) if isinstance(design, TwoStateDesign) else None,
            circuit=CircuitSpecPayload.from_domain(report.circuit),
            waveplates={
                path: PathWaveplatesPayload(
                    u=WaveplateTriplePayload.from_domain(u), v=WaveplateTriplePayload.from_domain(v)
                )
                for path, (u, v) in report.waveplates.items()
            },
            simulation=SimulationCheckPayload(
                rho=DensityMatrixPayload.from_domain(report.simulated),
                F=report.simulated_success,
                predicted_F=report.predicted_success,
                fidelity=fidelity,
                fidelity_residual=1.0 - fidelity,
                success_residual=report.success_residual,
                state_residual=report.state_residual,
            ),
        )
