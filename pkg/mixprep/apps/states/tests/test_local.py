import itertools

import numpy as np
import pytest

from mixprep.utils.errors import InfeasibleDesignError, InvalidInputError
from mixprep.apps.states.density import LocalUnitary, PureState
from mixprep.apps.states.entanglement import pure_concurrence
from mixprep.apps.states.factories import LocalUnitaryFactory, PureStateFactory
from mixprep.apps.states.local import (
    FilterDirection,
    FilterSpec,
    WaveplateTriple,
    design_filter,
    hwp,
    phase_insensitive_distance,
    qwp,
    schmidt_extract,
    transformation_probabilities,
    waveplate_decompose,
)


def test_schmidt_extract_round_trip():
    for seed in range(50):
        psi = PureStateFactory(seed=seed)
        form = schmidt_extract(psi)
        assert 0 <= form.theta <= np.pi / 4 + 1e-12
        assert form.residual(psi) < 1e-10
        assert np.sin(2 * form.theta) == pytest.approx(pure_concurrence(psi), abs=1e-10)
        assert np.linalg.det(form.u.matrix) == pytest.approx(1.0)
        assert np.linalg.det(form.v.matrix) == pytest.approx(1.0)


def test_schmidt_extract_of_rotated_schmidt_state():
    u, v = LocalUnitaryFactory(seed=1), LocalUnitaryFactory(seed=2)
    psi = PureState.schmidt(0.3).apply(u, v)
    form = schmidt_extract(psi)
    assert form.theta == pytest.approx(0.3, abs=1e-12)
    assert form.residual(psi) < 1e-10


def test_schmidt_extract_recovers_angle(rng):
    for index in range(200):
        theta = rng.uniform(0, np.pi / 4)
        u = LocalUnitaryFactory(seed=7000 + 2 * index)
        v = LocalUnitaryFactory(seed=7001 + 2 * index)
        psi = PureState.schmidt(theta).apply(u, v)
        assert schmidt_extract(psi).theta == pytest.approx(theta, abs=1e-10)


def test_schmidt_extract_of_product_and_bell(bell_state):
    assert schmidt_extract(PureState(np.array([0, 0, 0, 1]))).theta == pytest.approx(0.0, abs=1e-12)
    form = schmidt_extract(bell_state)
    assert form.theta == pytest.approx(np.pi / 4)
    assert form.residual(bell_state) < 1e-10


def test_plates_are_special_unitary():
    for angle in (0.0, 0.3, 1.2):
        for plate in (qwp(angle), hwp(angle)):
            assert np.allclose(plate @ plate.conj().T, np.eye(2), atol=1e-12)
            assert np.linalg.det(plate) == pytest.approx(1.0)
    # A half-wave plate at 0 flips the sign of V relative to H
    assert phase_insensitive_distance(hwp(0.0), np.diag([1, -1])) < 1e-12


@pytest.mark.parametrize("seed", range(100))
def test_waveplate_decompose_random(seed):
    u = LocalUnitaryFactory(seed=seed)
    triple = waveplate_decompose(u)
    assert phase_insensitive_distance(triple.jones(), u.matrix) < 1e-9
    assert all(0 <= angle <= np.pi for angle in (triple.qwp1, triple.hwp, triple.qwp2))


@pytest.mark.parametrize(
    "matrix",
    [
        np.eye(2),
        np.diag([1, -1]),
        np.array([[0, 1], [1, 0]]),
        np.diag([1, 1j]),
        np.array([[1, 1], [1, -1]]) / np.sqrt(2),
    ],
)
def test_waveplate_decompose_special_cases(matrix):
    triple = waveplate_decompose(LocalUnitary(matrix))
    assert phase_insensitive_distance(triple.jones(), matrix) < 1e-9


def test_waveplate_triple_degrees():
    triple = WaveplateTriple(qwp1=np.pi / 4, hwp=0.0, qwp2=np.pi / 2)
    assert triple.degrees() == pytest.approx((45.0, 0.0, 90.0))


def test_transformation_probabilities_edges():
    assert transformation_probabilities(0.5, 0.5) == (1.0, 1.0)
    k1, k2 = transformation_probabilities(0.7, 0.0)
    assert k1 == 0.0
    assert k2 == pytest.approx(np.cos(0.7) ** 2)
    with pytest.raises(InvalidInputError):
        transformation_probabilities(0.3, 0.5)
    with pytest.raises(InvalidInputError):
        transformation_probabilities(1.0, 0.5)


def test_filters_on_angle_grid():
    alphas = np.linspace(0.1, np.pi / 4, 10)
    fractions = np.linspace(0.1, 0.9, 5)
    for alpha, fraction in itertools.product(alphas, fractions):
        beta = alpha * fraction
        raise_filter = design_filter(alpha, beta, FilterDirection.RAISE)
        lower_filter = design_filter(alpha, beta, FilterDirection.LOWER)
        assert raise_filter.success_prob == pytest.approx(np.sin(beta) ** 2 / np.sin(alpha) ** 2, abs=1e-12)
        assert lower_filter.success_prob == pytest.approx(np.cos(alpha) ** 2 / np.cos(beta) ** 2, abs=1e-12)

        success, raised = raise_filter.apply(PureState.schmidt(beta).amplitudes)
        assert success == pytest.approx(raise_filter.success_prob, abs=1e-12)
        assert np.allclose(raised, PureState.schmidt(alpha).amplitudes, atol=1e-12)

        success, lowered = lower_filter.apply(PureState.schmidt(alpha).amplitudes)
        assert success == pytest.approx(lower_filter.success_prob, abs=1e-12)
        assert np.allclose(lowered, PureState.schmidt(beta).amplitudes, atol=1e-12)


def test_identity_filter_when_angles_match():
    spec = design_filter(0.4, 0.4, FilterDirection.RAISE)
    assert (spec.f_h, spec.f_v, spec.success_prob) == (1.0, 1.0, 1.0)


def test_raise_from_product_state_is_infeasible():
    with pytest.raises(InfeasibleDesignError):
        design_filter(0.7, 0.0, FilterDirection.RAISE)
    lowered = design_filter(0.7, 0.0, FilterDirection.LOWER)
    assert lowered.f_v == 0.0
    assert lowered.success_prob == pytest.approx(np.cos(0.7) ** 2)


def test_filter_spec_rejects_inconsistent_success():
    with pytest.raises(InvalidInputError):
        FilterSpec(f_h=0.5, f_v=1.0, success_prob=0.9, theta_in=0.3, theta_out=0.6)
