"""
Success-probability sweeps of the two-state scheme along one parameter,
written as CSV tables with full double precision.
"""
import csv
import logging
from dataclasses import dataclass, field
from enum import Enum
from types import MappingProxyType
from typing import Dict, Mapping, Optional, Sequence, TextIO, Tuple, Union

import numpy as np

from mixprep.constants import DEFAULT_SWEEP_POINTS
from mixprep.utils.errors import InvalidInputError
from mixprep.apps.states.local import transformation_probabilities

from .optimizer import InitialState, optimal_p, optimal_p_prime, two_state_success

logger = logging.getLogger(__name__)

DEFAULT_K1 = 0.8
DEFAULT_K2 = 0.7
DEFAULT_ALPHA = 0.7
DEFAULT_ETA1_RATIOS = (1e4, 1.0, 1e-4)
DEFAULT_BETA_RATIOS = (1e-3, 1e3)
RATIO_RANGE = (1e-4, 1e4)


class SweepAxis(str, Enum):
    ETA1 = "eta1"
    A = "A"
    BETA = "beta"


Metadata = Union[float, str]


@dataclass(frozen=True, eq=False)
class SweepTable:
    axis: SweepAxis
    values: np.ndarray
    curves: Mapping[str, np.ndarray]
    metadata: Mapping[str, Metadata] = field(default_factory=dict)

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 1 or values.size == 0:
            raise InvalidInputError("A sweep needs a non-empty one-dimensional grid")
        if np.any(np.diff(values) <= 0):
            raise InvalidInputError("Sweep grid must be strictly ascending")
        if not self.curves:
            raise InvalidInputError("A sweep needs at least one curve")
        curves: Dict[str, np.ndarray] = {}
        for name, curve in self.curves.items():
            curve = np.array(curve, dtype=float)
            if curve.shape != values.shape:
                raise InvalidInputError(f"Curve {name} has {curve.size} points, the grid has {values.size}")
            if np.any(~np.isfinite(curve)) or np.any(curve < -1e-12) or np.any(curve > 1 + 1e-12):
                raise InvalidInputError(f"Curve {name} leaves [0, 1]")
            curve.setflags(write=False)
            curves[name] = curve
        values.setflags(write=False)
        object.__setattr__(self, "axis", SweepAxis(self.axis))
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "curves", MappingProxyType(curves))
        object.__setattr__(self, "metadata", MappingProxyType(dict(self.metadata)))

    def argmin(self, name: str) -> float:
        return float(self.values[int(np.argmin(self.curves[name]))])

    def argmax(self, name: str) -> float:
        return float(self.values[int(np.argmax(self.curves[name]))])

    def write_csv(self, stream: TextIO):
        for key, value in self.metadata.items():
            stream.write(f"# {key}={_format(value)}\n")
        writer = csv.writer(stream, lineterminator="\n")
        names = list(self.curves)
        writer.writerow([self.axis.value] + names)
        for index, value in enumerate(self.values):
            writer.writerow([_format(value)] + [_format(self.curves[name][index]) for name in names])


def _format(value: Metadata) -> str:
    if isinstance(value, str):
        return value
    return format(float(value), ".17g")


def curve_name(prefix: str, a: float) -> str:
    return f"{prefix}[A={a:g}]"


def default_grid(
    axis: SweepAxis,
    points: int = DEFAULT_SWEEP_POINTS,
    alpha: float = DEFAULT_ALPHA,
    log: bool = True,
    ratio_range: Tuple[float, float] = RATIO_RANGE,
):
    if points < 2:
        raise InvalidInputError(f"A sweep needs at least 2 points, got {points}")
    axis = SweepAxis(axis)
    if axis == SweepAxis.ETA1:
        return np.linspace(0.0, 1.0, points)
    if axis == SweepAxis.A:
        low, high = ratio_range
        if log:
            if low <= 0 or high <= low:
                raise InvalidInputError(f"A logarithmic A grid needs 0 < low < high, got {ratio_range}")
            return np.logspace(np.log10(low), np.log10(high), points)
        if low < 0 or high <= low:
            raise InvalidInputError(f"A linear A grid needs 0 <= low < high, got {ratio_range}")
        return np.linspace(low, high, points)
    return np.linspace(0.0, alpha, points)


def _check_grid(grid, low: float, high: float, name: str) -> np.ndarray:
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise InvalidInputError(f"The {name} grid is empty")
    if np.any(np.diff(grid) <= 0):
        raise InvalidInputError(f"The {name} grid must be strictly ascending")
    if grid[0] < low or grid[-1] > high:
        raise InvalidInputError(f"The {name} grid must lie in [{low}, {high}]")
    return grid


def _check_k(k: float, name: str):
    if not 0.0 < k <= 1.0:
        raise InvalidInputError(f"{name} must lie in (0, 1], got {k}")


def _check_ratios(ratios: Sequence[float]) -> Sequence[float]:
    ratios = [float(a) for a in ratios]
    if not ratios or any(not np.isfinite(a) or a < 0 for a in ratios):
        raise InvalidInputError(f"Mixing ratios must be a non-empty list of finite non-negative values, got {ratios}")
    return ratios


def sweep_eta1(grid, k1: float = DEFAULT_K1, k2: float = DEFAULT_K2, ratios=DEFAULT_ETA1_RATIOS) -> SweepTable:
    """Un-optimized P and P' against eta1, eta2 fixed by the mixing-ratio constraint"""
    grid = _check_grid(grid, 0.0, 1.0, "eta1")
    _check_k(k1, "k1")
    _check_k(k2, "k2")
    curves = {}
    for a in _check_ratios(ratios):
        curves[curve_name("P", a)] = two_state_success(grid, k1, k2, a, InitialState.PHI_BETA)
        curves[curve_name("P'", a)] = two_state_success(grid, k1, k2, a, InitialState.PHI_ALPHA)
    return SweepTable(SweepAxis.ETA1, grid, curves, {"k1": k1, "k2": k2})


def sweep_ratio(grid, k1: float = DEFAULT_K1, k2: float = DEFAULT_K2) -> SweepTable:
    """Optimal P and P' against the mixing ratio A"""
    grid = _check_grid(grid, 0.0, np.inf, "A")
    _check_k(k1, "k1")
    _check_k(k2, "k2")
    curves = {"P": optimal_p(k1, grid), "P'": optimal_p_prime(k2, grid)}
    return SweepTable(SweepAxis.A, grid, curves, {"k1": k1, "k2": k2})


def sweep_beta(grid, alpha: float = DEFAULT_ALPHA, ratios=DEFAULT_BETA_RATIOS) -> SweepTable:
    """Optimal P and P' against the smaller Schmidt angle beta, for fixed alpha"""
    if not 0.0 < alpha <= np.pi / 4:
        raise InvalidInputError(f"alpha must lie in (0, pi/4], got {alpha}")
    grid = _check_grid(grid, 0.0, alpha, "beta")
    k1 = np.empty_like(grid)
    k2 = np.empty_like(grid)
    for index, beta in enumerate(grid):
        k1[index], k2[index] = transformation_probabilities(alpha, float(beta))
    curves = {}
    for a in _check_ratios(ratios):
        curves[curve_name("P", a)] = optimal_p(k1, a)
        curves[curve_name("P'", a)] = optimal_p_prime(k2, a)
    return SweepTable(SweepAxis.BETA, grid, curves, {"alpha": alpha})


def sweep(
    axis: SweepAxis,
    grid: Optional[Sequence[float]] = None,
    points: int = DEFAULT_SWEEP_POINTS,
    k1: float = DEFAULT_K1,
    k2: float = DEFAULT_K2,
    alpha: float = DEFAULT_ALPHA,
    ratios: Optional[Sequence[float]] = None,
    log: bool = True,
    ratio_range: Tuple[float, float] = RATIO_RANGE,
) -> SweepTable:
    axis = SweepAxis(axis)
    if grid is None:
        grid = default_grid(axis, points, alpha=alpha, log=log, ratio_range=ratio_range)
    if axis == SweepAxis.ETA1:
        table = sweep_eta1(grid, k1, k2, DEFAULT_ETA1_RATIOS if ratios is None else ratios)
    elif axis == SweepAxis.A:
        table = sweep_ratio(grid, k1, k2)
    else:
        table = sweep_beta(grid, alpha, DEFAULT_BETA_RATIOS if ratios is None else ratios)
    logger.info(f"Swept {axis.value} over {table.values.size} points, curves {list(table.curves)}")
    return table
