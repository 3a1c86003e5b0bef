import numpy as np
import pytest

from mixprep.utils.errors import InfeasibleDesignError, InvalidInputError
from mixprep.apps.designer.optimizer import (
    InitialState,
    brute_force_optimal,
    brute_force_two,
    choose_initial,
    constrained_eta2,
    fixed_point,
    initial_threshold,
    optimal_general,
    optimal_two,
    path_probabilities,
    two_state_success,
)

P = InitialState.PHI_BETA
P_PRIME = InitialState.PHI_ALPHA


def random_weights(rng):
    count = int(rng.integers(1, 5))
    weights = np.sort(rng.dirichlet(np.ones(count)))[::-1]
    return np.pad(weights, (0, 4 - count))


def test_path_probabilities():
    assert path_probabilities([1] * 6) == pytest.approx([1, 0, 0, 0])
    assert path_probabilities([0.5] * 6) == pytest.approx([1 / 16] * 4)
    assert path_probabilities([1, 1, 0.5, 1, 0.5, 1]) == pytest.approx([0.25, 0.25, 0, 0])
    with pytest.raises(InvalidInputError):
        path_probabilities([1.1, 1, 1, 1, 1, 1])
    with pytest.raises(InvalidInputError):
        path_probabilities([1, 1, 1])


def test_optimal_general_cases():
    single = optimal_general([1, 0, 0, 0])
    assert single.case_id == 3
    assert single.etas == (1.0,) * 6
    assert single.f_optimal == 1.0

    pair = optimal_general([0.5, 0.5, 0, 0])
    assert pair.case_id == 2
    assert pair.etas == pytest.approx((1, 1, 0.5, 1, 0.5, 1))
    assert pair.f_optimal == pytest.approx(0.5)

    uniform = optimal_general([0.25] * 4)
    assert uniform.case_id == 1
    assert uniform.etas == pytest.approx((0.5,) * 6)
    assert uniform.f_optimal == pytest.approx(0.25)


def test_optimal_general_accepts_short_weight_lists():
    assert optimal_general([0.7, 0.3]).case_id == 2
    assert optimal_general([0.5, 0.3, 0.2]).case_id == 1


@pytest.mark.parametrize(
    "weights",
    [[0.3, 0.7, 0, 0], [0, 0, 0, 0], [0.5, 0.4, 0, 0], [0.5, 0.5, 0.5, -0.5], [0.2] * 5],
)
def test_optimal_general_rejects_bad_weights(weights):
    with pytest.raises(InvalidInputError):
        optimal_general(weights)


def test_optimal_general_reproduces_weights(rng):
    for _ in range(200):
        weights = random_weights(rng)
        optimum = optimal_general(weights)
        probabilities = path_probabilities(optimum.etas)
        assert probabilities.sum() == pytest.approx(optimum.f_optimal, abs=1e-12)
        assert probabilities / probabilities.sum() == pytest.approx(weights, abs=1e-12)


def test_brute_force_reference_values():
    assert brute_force_optimal([1, 0, 0, 0]) == pytest.approx(1.0)
    assert brute_force_optimal([0.25] * 4) == pytest.approx(0.25, abs=1e-2)
    assert brute_force_optimal([0.5, 0.5, 0, 0]) == pytest.approx(0.5, abs=1e-2)
    with pytest.raises(InvalidInputError):
        brute_force_optimal([1, 0, 0, 0], resolution=0.5)


def test_grid_oracle_rejects_ratio_outside_grid_span():
    weights = [1 - 1e-8, 1e-8, 0, 0]
    with pytest.raises(InfeasibleDesignError):
        brute_force_optimal(weights, resolution=1e-3)
    assert brute_force_optimal(weights, resolution=1e-5) == pytest.approx(optimal_general(weights).f_optimal, abs=1e-3)


def test_closed_form_matches_grid_oracle(rng):
    resolution = 1e-3
    for _ in range(300):
        weights = random_weights(rng)
        f_optimal = optimal_general(weights).f_optimal
        f_hat = brute_force_optimal(weights, resolution)
        assert abs(f_optimal - f_hat) <= 10 * resolution
        assert f_hat <= f_optimal + 1e-12


def test_optimal_two_at_zero_ratio():
    assert optimal_two(0.8, 0.7, 0.0, P) == pytest.approx((1.0, 0.8))
    assert optimal_two(0.8, 0.7, 0.0, P_PRIME) == pytest.approx((1.0, 1.0))


def test_optimal_two_reference_point():
    eta, success = optimal_two(0.8, 0.7, 1.0, P)
    assert eta == pytest.approx(1 / (1 + np.sqrt(0.8)))
    assert success == pytest.approx(1.6 / (1 + np.sqrt(0.8)) ** 2)
    assert success == pytest.approx(0.4458, abs=1e-4)


def test_optimal_two_satisfies_ratio_constraint(rng):
    for _ in range(50):
        k1, k2 = rng.uniform(0.05, 1.0, size=2)
        a = 10 ** rng.uniform(-3, 3)
        eta, _ = optimal_two(k1, k2, a, P)
        assert (1 - eta) ** 2 == pytest.approx(a * k1 * eta**2, abs=1e-12)
        eta, _ = optimal_two(k1, k2, a, P_PRIME)
        assert k2 * (1 - eta) ** 2 == pytest.approx(a * eta**2, abs=1e-12)


def test_optimal_two_matches_grid_search(rng):
    for _ in range(50):
        k1, k2 = rng.uniform(0.05, 1.0, size=2)
        a = 10 ** rng.uniform(-3, 3)
        for initial in (P, P_PRIME):
            eta, success = optimal_two(k1, k2, a, initial)
            eta_hat, success_hat = brute_force_two(k1, k2, a, initial, resolution=1e-4)
            assert success == pytest.approx(success_hat, abs=1e-6)
            assert success >= success_hat - 1e-12


def test_optimal_two_limits():
    k1, k2 = 0.8, 0.7
    assert optimal_two(k1, k2, 1e-16, P)[1] == pytest.approx(k1, abs=1e-6)
    assert optimal_two(k1, k2, 1e-16, P_PRIME)[1] == pytest.approx(1.0, abs=1e-6)
    assert optimal_two(k1, k2, 1e16, P)[1] == pytest.approx(1.0, abs=1e-6)
    assert optimal_two(k1, k2, 1e16, P_PRIME)[1] == pytest.approx(k2, abs=1e-6)


def test_optimal_two_limits_converge_like_square_root():
    # Deviation from each limit at A = 1e-8 and 1e8 is about 2 sqrt(A k) or 2 sqrt(k / A)
    k1, k2 = 0.8, 0.7
    assert abs(optimal_two(k1, k2, 1e-8, P)[1] - k1) <= 2 * k1 * np.sqrt(1e-8 * k1) + 1e-12
    assert abs(optimal_two(k1, k2, 1e-8, P_PRIME)[1] - 1) <= 2 * np.sqrt(1e-8 / k2) + 1e-12
    assert abs(optimal_two(k1, k2, 1e8, P)[1] - 1) <= 2 / np.sqrt(1e8 * k1) + 1e-12
    assert abs(optimal_two(k1, k2, 1e8, P_PRIME)[1] - k2) <= 2 * k2 * np.sqrt(k2 / 1e8) + 1e-12


@pytest.mark.parametrize("args", [(0.0, 0.7, 1.0, P), (0.8, 1.2, 1.0, P_PRIME), (0.8, 0.7, -1.0, P)])
def test_optimal_two_rejects_bad_parameters(args):
    with pytest.raises(InvalidInputError):
        optimal_two(*args)


def test_threshold_symmetric_case():
    assert initial_threshold(0.6, 0.6) == pytest.approx(0.5)
    assert initial_threshold(1.0, 1.0) == 0.5


def test_choose_initial_examples():
    assert choose_initial(0.8, 0.7, 0.9)[0] == P_PRIME
    assert choose_initial(0.8, 0.7, 0.0)[0] == P
    with pytest.raises(InvalidInputError):
        choose_initial(0.8, 0.7, 1.5)


def test_choose_initial_agrees_with_direct_comparison(rng):
    for _ in range(100):
        k1, k2 = rng.uniform(0.05, 0.99, size=2)
        p = rng.uniform(0.01, 0.99)
        a = (1 - p) / p
        initial, _ = choose_initial(k1, k2, p)
        p_beta = optimal_two(k1, k2, a, P)[1]
        p_alpha = optimal_two(k1, k2, a, P_PRIME)[1]
        if initial == P:
            assert p_beta >= p_alpha - 1e-12
        else:
            assert p_alpha >= p_beta - 1e-12


@pytest.mark.parametrize(
    "k, which, expected",
    [
        (1.0, P, (0.5, 0.5)),
        (0.8, P, (1 / 1.8, 0.8 / 1.8)),
        (0.7, P_PRIME, (0.7 / 1.7, 0.7 / 1.7)),
    ],
)
def test_fixed_point_values(k, which, expected):
    assert fixed_point(k, which) == pytest.approx(expected)


@pytest.mark.parametrize("k", [0.3, 0.7, 0.8, 1.0])
def test_fixed_points_do_not_depend_on_ratio(k):
    ratios = [1e-4, 1e-2, 1.0, 1e2, 1e4]
    eta, value = fixed_point(k, P)
    for a in ratios:
        assert two_state_success(eta, k, 0.5, a, P) == pytest.approx(value, abs=1e-12)
    eta, value = fixed_point(k, P_PRIME)
    for a in ratios:
        assert two_state_success(eta, 0.5, k, a, P_PRIME) == pytest.approx(value, abs=1e-12)


def test_constrained_eta2_closes_ratio():
    eta1 = np.linspace(0.05, 0.95, 19)
    eta2 = constrained_eta2(eta1, 0.8, 0.7, 2.0, P)
    assert (1 - eta1) * (1 - eta2) == pytest.approx(2.0 * 0.8 * eta1 * eta2)
    eta2 = constrained_eta2(eta1, 0.8, 0.7, 2.0, P_PRIME)
    assert 0.7 * (1 - eta1) * (1 - eta2) == pytest.approx(2.0 * eta1 * eta2)


def test_two_state_success_peaks_at_closed_form():
    grid = np.linspace(0, 1, 100001)
    values = two_state_success(grid, 0.8, 0.7, 1.0, P)
    eta, success = optimal_two(0.8, 0.7, 1.0, P)
    assert grid[np.argmax(values)] == pytest.approx(eta, abs=1e-5)
    assert values.max() == pytest.approx(success, abs=1e-9)
