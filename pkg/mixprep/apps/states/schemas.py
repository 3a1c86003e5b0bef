"""JSON forms of the state types. Matrices are split into row-major "re"/"im" arrays."""
from typing import ClassVar, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, RootModel, field_validator, model_validator

from mixprep.constants import PHYSICAL_TOL

from .density import DensityMatrix, LocalUnitary, PureState, as_complex_matrix
from .entanglement import Branch, Decomposition
from .local import FilterSpec, SchmidtForm, WaveplateTriple


class ComplexMatrixPayload(BaseModel):
    model_config = ConfigDict(extra="forbid")

    re: List[List[float]]
    im: Optional[List[List[float]]] = None

    expected_size: ClassVar[int] = 0

    @model_validator(mode="after")
    def check_shape(self):
        re = np.asarray(self.re, dtype=float)
        im = np.zeros_like(re) if self.im is None else np.asarray(self.im, dtype=float)
        size = self.expected_size
        if re.shape != (size, size) or im.shape != (size, size):
            raise ValueError(f"'re' and 'im' must both be {size}x{size} arrays")
        return self

    def matrix(self) -> np.ndarray:
        re = np.asarray(self.re, dtype=float)
        im = np.zeros_like(re) if self.im is None else np.asarray(self.im, dtype=float)
        return as_complex_matrix(re + 1j * im)

    @classmethod
    def from_matrix(cls, matrix: np.ndarray):
        matrix = np.asarray(matrix, dtype=complex)
        return cls(re=matrix.real.tolist(), im=matrix.imag.tolist())


class DensityMatrixPayload(ComplexMatrixPayload):
    expected_size: ClassVar[int] = 4

    def to_domain(self, tol: float = PHYSICAL_TOL) -> DensityMatrix:
        return DensityMatrix(self.matrix(), tol=tol)

    @classmethod
    def from_domain(cls, rho) -> "DensityMatrixPayload":
        return cls.from_matrix(rho.matrix if isinstance(rho, DensityMatrix) else rho)


class LocalUnitaryPayload(ComplexMatrixPayload):
    expected_size: ClassVar[int] = 2

    def to_domain(self) -> LocalUnitary:
        return LocalUnitary(self.matrix())

    @classmethod
    def from_domain(cls, u: LocalUnitary) -> "LocalUnitaryPayload":
        return cls.from_matrix(u.matrix)


class PureStatePayload(BaseModel):
    model_config = ConfigDict(extra="forbid")

    re: List[float]
    im: Optional[List[float]] = None

    @field_validator("re", "im")
    @classmethod
    def four_amplitudes(cls, value):
        if value is not None and len(value) != 4:
            raise ValueError("A two-photon pure state has exactly 4 amplitudes")
        return value

    def to_domain(self) -> PureState:
        im = self.im if self.im is not None else [0.0] * 4
        return PureState(np.asarray(self.re) + 1j * np.asarray(im))

    @classmethod
    def from_domain(cls, psi: PureState) -> "PureStatePayload":
        return cls(re=psi.amplitudes.real.tolist(), im=psi.amplitudes.imag.tolist())


class BranchPayload(BaseModel):
    model_config = ConfigDict(extra="forbid")

    p: float
    state: PureStatePayload


class DecompositionPayload(RootModel[List[BranchPayload]]):
    def to_domain(self) -> Decomposition:
        return Decomposition(tuple(Branch(b.p, b.state.to_domain()) for b in self.root))

    @classmethod
    def from_domain(cls, decomposition: Decomposition) -> "DecompositionPayload":
        return cls(
            [BranchPayload(p=b.weight, state=PureStatePayload.from_domain(b.state)) for b in decomposition.branches]
        )


class DecompositionReportPayload(BaseModel):
    concurrence: float
    eof: float
    rank: int
    residual: float
    branches: DecompositionPayload


class SchmidtFormPayload(BaseModel):
    model_config = ConfigDict(extra="forbid")

    theta: float
    u: LocalUnitaryPayload
    v: LocalUnitaryPayload
    phase: float

    def to_domain(self) -> SchmidtForm:
        return SchmidtForm(theta=self.theta, u=self.u.to_domain(), v=self.v.to_domain(), phase=self.phase)

    @classmethod
    def from_domain(cls, form: SchmidtForm) -> "SchmidtFormPayload":
        return cls(
            theta=form.theta,
            u=LocalUnitaryPayload.from_domain(form.u),
            v=LocalUnitaryPayload.from_domain(form.v),
            phase=form.phase,
        )


class WaveplateTriplePayload(BaseModel):
    model_config = ConfigDict(extra="forbid")

    qwp1: float
    hwp: float
    qwp2: float

    def to_domain(self) -> WaveplateTriple:
        return WaveplateTriple(qwp1=self.qwp1, hwp=self.hwp, qwp2=self.qwp2)

    @classmethod
    def from_domain(cls, triple: WaveplateTriple) -> "WaveplateTriplePayload":
        return cls(qwp1=triple.qwp1, hwp=triple.hwp, qwp2=triple.qwp2)


class FilterSpecPayload(BaseModel):
    model_config = ConfigDict(extra="forbid")

    f_h: float
    f_v: float
    success_prob: float
    theta_in: float
    theta_out: float

    def to_domain(self) -> FilterSpec:
        return FilterSpec(**self.model_dump())

    @classmethod
    def from_domain(cls, spec: FilterSpec) -> "FilterSpecPayload":
        return cls(
            f_h=spec.f_h,
            f_v=spec.f_v,
            success_prob=spec.success_prob,
            theta_in=spec.theta_in,
            theta_out=spec.theta_out,
        )
