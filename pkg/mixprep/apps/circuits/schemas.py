from typing import Dict, List, Tuple

from pydantic import BaseModel, ConfigDict, Field

from mixprep.constants import DEFAULT_KAPPA
from mixprep.apps.states.schemas import DensityMatrixPayload, FilterSpecPayload, LocalUnitaryPayload

from .geometry import Geometry, Violation, ViolationCode
from .simulator import CircuitSpec, Layout


class SprPayload(BaseModel):
    model_config = ConfigDict(extra="forbid")

    u: LocalUnitaryPayload
    v: LocalUnitaryPayload


class CircuitSpecPayload(BaseModel):
    model_config = ConfigDict(extra="forbid")

    layout: Layout = Layout.FOUR_PATH
    etas: List[float] = Field(min_length=6, max_length=6)
    theta0: float
    sprs: Dict[int, SprPayload] = Field(default_factory=dict)
    filters: Dict[int, FilterSpecPayload] = Field(default_factory=dict)
    coupler_efficiency: float = 1.0

    def to_domain(self) -> CircuitSpec:
        return CircuitSpec(
            etas=tuple(self.etas),
            theta0=self.theta0,
            sprs={path: (spr.u.to_domain(), spr.v.to_domain()) for path, spr in self.sprs.items()},
            filters={path: spec.to_domain() for path, spec in self.filters.items()},
            coupler_efficiency=self.coupler_efficiency,
            layout=self.layout,
        )

    @classmethod
    def from_domain(cls, circuit: CircuitSpec) -> "CircuitSpecPayload":
        return cls(
            layout=circuit.layout,
            etas=list(circuit.etas),
            theta0=circuit.theta0,
            sprs={
                path: SprPayload(u=LocalUnitaryPayload.from_domain(u), v=LocalUnitaryPayload.from_domain(v))
                for path, (u, v) in circuit.sprs.items()
            },
            filters={path: FilterSpecPayload.from_domain(spec) for path, spec in circuit.filters.items()},
            coupler_efficiency=circuit.coupler_efficiency,
        )


class GeometryPayload(BaseModel):
    model_config = ConfigDict(extra="forbid")

    lengths_a: List[float]
    lengths_b: List[float]
    l_coh: float
    l_pump: float
    window_T: float
    distinguishability_kappa: float = DEFAULT_KAPPA

    def to_domain(self) -> Geometry:
        return Geometry(
            lengths_a=tuple(self.lengths_a),
            lengths_b=tuple(self.lengths_b),
            l_coh=self.l_coh,
            l_pump=self.l_pump,
            window_t=self.window_T,
            kappa=self.distinguishability_kappa,
        )


class ViolationPayload(BaseModel):
    code: ViolationCode
    arm: str
    paths: Tuple[int, int]
    value: float
    limit: float
    margin: float
    message: str

    @classmethod
    def from_domain(cls, violation: Violation) -> "ViolationPayload":
        return cls(
            code=violation.code,
            arm=violation.arm,
            paths=violation.paths,
            value=violation.value,
            limit=violation.limit,
            margin=violation.margin,
            message=violation.message,
        )


class GeometryReportPayload(BaseModel):
    valid: bool
    checked: bool = True
    violations: List[ViolationPayload] = Field(default_factory=list)

    @classmethod
    def from_violations(cls, violations: List[Violation]) -> "GeometryReportPayload":
        return cls(valid=not violations, violations=[ViolationPayload.from_domain(v) for v in violations])


class SimulationReportPayload(BaseModel):
    rho: DensityMatrixPayload
    F: float
    survival: float
    coincidence_weights: List[float]
    geometry: GeometryReportPayload
