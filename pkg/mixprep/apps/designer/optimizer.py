"""
Closed-form optimal beam-splitter settings and the grid oracles that
check them.

General scheme: four branch weights are routed to four coinciding paths;
p_ii are products of the six transmissions and F = sum p_ii is maximized
with the normalized p_ii pinned to the weights. Two-state scheme: two
paths, one carrying a distillation filter of probability k1 (raise) or
k2 (lower), mixing ratio A = (1 - p) / p.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Tuple

import numpy as np

from mixprep.constants import DEFAULT_ORACLE_RESOLUTION, ZERO_WEIGHT
from mixprep.utils.errors import InfeasibleDesignError, InvalidInputError

logger = logging.getLogger(__name__)

WEIGHT_SUM_TOL = 1e-9


class InitialState(str, Enum):
    PHI_ALPHA = "phi_alpha"
    PHI_BETA = "phi_beta"


def path_probabilities(etas: Sequence[float]) -> np.ndarray:
    """(p11, p22, p33, p44) for the six transmissions eta1..eta6"""
    etas = np.asarray(etas, dtype=float)
    if etas.shape != (6,):
        raise InvalidInputError(f"Expected 6 transmissions, got {etas.size}")
    if np.any(etas < 0) or np.any(etas > 1):
        raise InvalidInputError(f"Transmissions must lie in [0, 1], got {etas.tolist()}")
    e1, e2, e3, e4, e5, e6 = etas
    return np.array(
        [
            e1 * e2 * e3 * e5,
            e1 * e2 * (1 - e3) * (1 - e5),
            (1 - e1) * (1 - e2) * e4 * e6,
            (1 - e1) * (1 - e2) * (1 - e4) * (1 - e6),
        ]
    )


def normalize_weights(weights: Sequence[float]) -> np.ndarray:
    """Validate descending weights summing to one and pad them to four entries"""
    w = np.asarray(weights, dtype=float).reshape(-1)
    if not 1 <= w.size <= 4:
        raise InvalidInputError(f"Expected 1 to 4 weights, got {w.size}")
    if np.any(w < -ZERO_WEIGHT):
        raise InvalidInputError("Weights cannot be negative")
    if abs(w.sum() - 1.0) > WEIGHT_SUM_TOL:
        raise InvalidInputError(f"Weights must sum to 1, got {w.sum():.12f}")
    if np.any(np.diff(w) > ZERO_WEIGHT):
        raise InvalidInputError("Weights must be sorted in descending order")
    if w[0] <= ZERO_WEIGHT:
        raise InvalidInputError("The leading weight must be positive")
    w = np.where(w < ZERO_WEIGHT, 0.0, w)
    return np.pad(w / w.sum(), (0, 4 - w.size))


@dataclass(frozen=True)
class GeneralOptimum:
    etas: Tuple[float, ...]
    f_optimal: float
    case_id: int


def optimal_general(weights: Sequence[float]) -> GeneralOptimum:
    """
    Maximal coincidence probability for the given branch weights.

    Case 1 (three or four nonzero weights) splits both photons evenly in
    amplitude sqrt(A_i); case 2 (two weights) only uses the upper sub-tree;
    case 3 (a single weight) sends everything down path 1.
    """
    w = normalize_weights(weights)
    ratios = w / w[0]
    roots = np.sqrt(ratios)
    active = int(np.count_nonzero(w))

    if active == 1:
        etas, f_optimal, case_id = (1.0,) * 6, 1.0, 3
    elif active == 2:
        split = 1 / (1 + roots[1])
        etas = (1.0, 1.0, split, 1.0, split, 1.0)
        f_optimal = (1 + ratios[1]) / (1 + roots[1]) ** 2
        case_id = 2
    else:
        total = roots.sum()
        upper = (1 + roots[1]) / total
        split_upper = 1 / (1 + roots[1])
        split_lower = roots[2] / (roots[2] + roots[3])
        etas = (upper, upper, split_upper, split_lower, split_upper, split_lower)
        f_optimal = ratios.sum() / total**2
        case_id = 1

    logger.debug(f"Weights {w.tolist()} -> case {case_id}, F = {f_optimal:.12f}")
    return GeneralOptimum(etas=tuple(float(e) for e in etas), f_optimal=float(f_optimal), case_id=case_id)


def _grid(resolution: float) -> np.ndarray:
    if not 0.0 < resolution <= 0.1:
        raise InvalidInputError(f"Grid resolution must lie in (0, 0.1], got {resolution}")
    count = int(round(1.0 / resolution))
    return np.arange(1, count) / count


def _pair_scale(wa: float, wb: float, grid: np.ndarray) -> float:
    """
    Largest c on the grid with eta_x eta_y = c wa and (1 - eta_x)(1 - eta_y) = c wb,
    eta_y solved from the ratio constraint for every grid eta_x.

    Only eta_y inside the grid's span [grid[0], grid[-1]] counts; a ratio
    wb / wa too small for that span has no feasible point.
    """
    if wb <= 0:
        return 1.0 / wa
    eta_y = wa * (1 - grid) / (wa * (1 - grid) + wb * grid)
    feasible = (eta_y >= grid[0]) & (eta_y <= grid[-1])
    if not feasible.any():
        raise InfeasibleDesignError(
            f"Weight ratio {wb / wa:.3e} needs a transmission outside the grid span "
            f"[{grid[0]:.3e}, {grid[-1]:.3e}]; refine the resolution"
        )
    return float(np.max(grid[feasible] * eta_y[feasible]) / wa)


def brute_force_optimal(weights: Sequence[float], resolution: float = DEFAULT_ORACLE_RESOLUTION) -> float:
    """
    Grid estimate of the optimal F for the general scheme.

    The weight constraints leave one free transmission per beam-splitter
    pair; each pair is searched on the grid with its partner solved
    exactly, and sub-trees combine through the top pair's own ratio.
    """
    w = normalize_weights(weights)
    grid = _grid(resolution)
    upper = _pair_scale(w[0], w[1], grid)
    if w[2] <= 0:
        return upper
    lower = _pair_scale(w[2], w[3], grid)
    return _pair_scale(1.0 / upper, 1.0 / lower, grid)


def _check_k(k: float, name: str):
    if not 0.0 < k <= 1.0:
        raise InvalidInputError(f"{name} must lie in (0, 1], got {k}")


def _check_ratio(a: float):
    if not (np.isfinite(a) and a >= 0):
        raise InvalidInputError(f"Mixing ratio A must be finite and non-negative, got {a}")


def mixing_ratio(p: float) -> float:
    """A = (1 - p) / p; infinite for p = 0"""
    if not 0.0 <= p <= 1.0:
        raise InvalidInputError(f"Component weight p must lie in [0, 1], got {p}")
    return np.inf if p == 0 else (1.0 - p) / p


def constrained_eta2(eta1, k1: float, k2: float, a: float, initial: InitialState):
    """eta2 fixing the output mixing ratio at A for a given eta1"""
    eta1 = np.asarray(eta1, dtype=float)
    if InitialState(initial) == InitialState.PHI_BETA:
        numerator = 1 - eta1
        denominator = (1 - eta1) + a * k1 * eta1
    else:
        numerator = k2 * (1 - eta1)
        denominator = k2 * (1 - eta1) + a * eta1
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(denominator > 0, numerator / np.where(denominator > 0, denominator, 1.0), 1.0)


def two_state_success(eta1, k1: float, k2: float, a: float, initial: InitialState):
    """P (initial |Phi(beta)>) or P' (initial |Phi(alpha)>) at eta1, eta2 from the constraint"""
    eta1 = np.asarray(eta1, dtype=float)
    eta2 = constrained_eta2(eta1, k1, k2, a, initial)
    if InitialState(initial) == InitialState.PHI_BETA:
        return k1 * eta1 * eta2 + (1 - eta1) * (1 - eta2)
    return eta1 * eta2 + k2 * (1 - eta1) * (1 - eta2)


def optimal_p(k1, a):
    """P = k1 (1 + A) / (1 + sqrt(A k1))^2, vectorized"""
    k1, a = np.asarray(k1, dtype=float), np.asarray(a, dtype=float)
    return k1 * (1 + a) / (1 + np.sqrt(a * k1)) ** 2


def optimal_p_prime(k2, a):
    """P' = k2 (1 + A) / (sqrt(k2) + sqrt(A))^2, vectorized"""
    k2, a = np.asarray(k2, dtype=float), np.asarray(a, dtype=float)
    return k2 * (1 + a) / (np.sqrt(k2) + np.sqrt(a)) ** 2


def optimal_two(k1: float, k2: float, a: float, initial: InitialState) -> Tuple[float, float]:
    """Optimal eta1 = eta2 and success probability of the two-state scheme"""
    initial = InitialState(initial)
    _check_ratio(a)
    if initial == InitialState.PHI_BETA:
        _check_k(k1, "k1")
        eta = 1 / (1 + np.sqrt(a * k1))
        success = optimal_p(k1, a)
    else:
        _check_k(k2, "k2")
        eta = np.sqrt(k2) / (np.sqrt(k2) + np.sqrt(a))
        success = optimal_p_prime(k2, a)
    return float(eta), float(success)


def initial_threshold(k1: float, k2: float) -> float:
    """Largest p for which starting from |Phi(beta)> is at least as good"""
    _check_k(k1, "k1")
    _check_k(k2, "k2")
    favour_beta = k1 * (1 - np.sqrt(k2)) ** 2
    favour_alpha = k2 * (1 - np.sqrt(k1)) ** 2
    if favour_beta + favour_alpha == 0:
        return 0.5
    return float(favour_beta / (favour_beta + favour_alpha))


def choose_initial(k1: float, k2: float, p: float) -> Tuple[InitialState, float]:
    if not 0.0 <= p <= 1.0:
        raise InvalidInputError(f"Component weight p must lie in [0, 1], got {p}")
    threshold = initial_threshold(k1, k2)
    initial = InitialState.PHI_BETA if p <= threshold else InitialState.PHI_ALPHA
    return initial, threshold


def fixed_point(k: float, which: InitialState) -> Tuple[float, float]:
    """(eta1, success) where the un-optimized success does not depend on A"""
    _check_k(k, "k")
    if InitialState(which) == InitialState.PHI_BETA:
        return 1 / (1 + k), k / (1 + k)
    return k / (1 + k), k / (1 + k)


def brute_force_two(
    k1: float,
    k2: float,
    a: float,
    initial: InitialState,
    resolution: float = 1e-4,
    grid: Optional[np.ndarray] = None,
) -> Tuple[float, float]:
    """Grid search of (eta1, success) for the two-state scheme, eta2 from the constraint"""
    _check_ratio(a)
    if grid is None:
        count = int(round(1.0 / resolution))
        grid = np.arange(0, count + 1) / count
    values = two_state_success(grid, k1, k2, a, initial)
    best = int(np.argmax(values))
    return float(grid[best]), float(values[best])
