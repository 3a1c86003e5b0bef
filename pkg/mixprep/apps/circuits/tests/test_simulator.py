from dataclasses import replace

import numpy as np
import pytest

from mixprep.utils.errors import InfeasibleDesignError, InvalidInputError
from mixprep.apps.circuits.factories import CircuitSpecFactory
from mixprep.apps.circuits.simulator import (
    CircuitSpec,
    Layout,
    apply_vbs,
    evolve,
    location_amplitudes,
    postselect_coincidence,
    simulate,
)
from mixprep.apps.designer.optimizer import path_probabilities
from mixprep.apps.states.density import LocalUnitary, PureState, fidelity
from mixprep.apps.states.factories import LocalUnitaryFactory
from mixprep.apps.states.local import FilterDirection, design_filter


def test_vbs_conserves_norm():
    amplitudes = apply_vbs([1, 0, 0, 0], 0.3, (0, 2))
    assert np.abs(amplitudes) ** 2 == pytest.approx([0.3, 0, 0.7, 0])
    assert np.linalg.norm(apply_vbs(amplitudes, 0.6, (0, 1))) == pytest.approx(1.0)
    with pytest.raises(InvalidInputError):
        apply_vbs([1, 0, 0, 0], 1.2, (0, 1))


def test_location_amplitudes_match_path_products():
    etas = (0.2, 0.3, 0.4, 0.5, 0.6, 0.7)
    a = np.abs(location_amplitudes(etas, Layout.FOUR_PATH, "A")) ** 2
    b = np.abs(location_amplitudes(etas, Layout.FOUR_PATH, "B")) ** 2
    assert a == pytest.approx([0.2 * 0.4, 0.2 * 0.6, 0.8 * 0.5, 0.8 * 0.5])
    assert b == pytest.approx([0.3 * 0.6, 0.3 * 0.4, 0.7 * 0.7, 0.7 * 0.3])
    assert a * b == pytest.approx(path_probabilities(etas))


def test_trivial_circuit_keeps_source():
    circuit = CircuitSpec(etas=(1.0,) * 6, theta0=0.4)
    result = simulate(circuit)
    assert result.success == pytest.approx(1.0)
    assert fidelity(result.rho, PureState.schmidt(0.4).density()) == pytest.approx(1.0, abs=1e-9)


def test_joint_state_is_normalized():
    joint = evolve(CircuitSpecFactory(seed=3))
    assert joint.survival == pytest.approx(1.0)
    for i in range(4):
        for j in range(4):
            if joint.weights[i, j] > 0:
                assert np.trace(joint.blocks[i, j]).real == pytest.approx(1.0)


def test_postselection_mixes_path_states():
    u = LocalUnitary(np.array([[0, 1], [1, 0]]))
    circuit = CircuitSpec(
        etas=(1.0, 1.0, 0.5, 1.0, 0.5, 1.0),
        theta0=np.pi / 4,
        sprs={2: (u, LocalUnitary.identity())},
    )
    result = simulate(circuit)
    assert result.success == pytest.approx(0.5)
    assert result.joint.coincidence_weights == pytest.approx([0.25, 0.25, 0, 0])
    phi_plus = PureState.schmidt(np.pi / 4)
    psi_plus = phi_plus.apply(u, LocalUnitary.identity())
    expected = (phi_plus.projector() + psi_plus.projector()) / 2
    assert np.allclose(result.rho.matrix, expected, atol=1e-12)


def test_coupler_efficiency_scales_success_only():
    lossless = simulate(CircuitSpecFactory(seed=11))
    lossy = simulate(CircuitSpecFactory(seed=11, coupler_efficiency=0.8))
    assert lossy.success == pytest.approx(0.8 * lossless.success)
    assert np.allclose(lossy.rho.matrix, lossless.rho.matrix, atol=1e-12)



def test_simulation_is_covariant_under_shared_local_rotations():
    for seed in range(20):
        circuit = CircuitSpecFactory(seed=seed)
        u0 = LocalUnitaryFactory(seed=8000 + 2 * seed).matrix
        v0 = LocalUnitaryFactory(seed=8001 + 2 * seed).matrix
        rotated = replace(
            circuit,
            sprs={path: (LocalUnitary(u0 @ u.matrix), LocalUnitary(v0 @ v.matrix)) for path, (u, v) in circuit.sprs.items()},
        )
        original, moved = simulate(circuit), simulate(rotated)
        local = np.kron(u0, v0)
        assert moved.success == pytest.approx(original.success, abs=1e-12)
        assert np.allclose(moved.rho.matrix, local @ original.rho.matrix @ local.conj().T, atol=1e-10)


def test_filtered_path():
    spec = design_filter(0.7, 0.3, FilterDirection.RAISE)
    circuit = CircuitSpec(etas=(1.0,) * 6, theta0=0.3, filters={1: spec}, layout=Layout.TWO_PATH)
    result = simulate(circuit)
    assert result.success == pytest.approx(spec.success_prob)
    assert fidelity(result.rho, PureState.schmidt(0.7).density()) == pytest.approx(1.0, abs=1e-9)


def test_filter_must_match_source_angle():
    spec = design_filter(0.7, 0.3, FilterDirection.RAISE)
    with pytest.raises(InvalidInputError):
        CircuitSpec(etas=(1.0,) * 6, theta0=0.5, filters={1: spec})


def test_two_path_layout_ignores_lower_splitters():
    circuit = CircuitSpec(etas=(0.6, 0.6, 0.1, 0.2, 0.3, 0.4), theta0=0.2, layout=Layout.TWO_PATH)
    assert circuit.etas == (0.6, 0.6, 1.0, 1.0, 1.0, 1.0)
    a, b = circuit.intensities()
    assert a == pytest.approx([0.6, 0.4, 0, 0])
    assert simulate(circuit).success == pytest.approx(0.36 + 0.16)


def test_no_coincidence_is_infeasible():
    # Photon A always on path 1, photon B always on path 3
    circuit = CircuitSpec(etas=(1.0, 0.0, 1.0, 1.0, 1.0, 1.0), theta0=0.2)
    with pytest.raises(InfeasibleDesignError):
        postselect_coincidence(evolve(circuit))


@pytest.mark.parametrize(
    "kwargs",
    [
        {"etas": (1.0,) * 5, "theta0": 0.1},
        {"etas": (1.0,) * 6, "theta0": 1.0},
        {"etas": (1.0,) * 6, "theta0": 0.1, "coupler_efficiency": 0.0},
        {"etas": (1.0,) * 6, "theta0": 0.1, "sprs": {5: (LocalUnitary.identity(), LocalUnitary.identity())}},
    ],
)
def test_circuit_validation(kwargs):
    with pytest.raises(InvalidInputError):
        CircuitSpec(**kwargs)
