import json
from io import StringIO

import pytest
from django.core.management import call_command
from django.core.management.base import CommandError

from mixprep.apps.circuits.factories import CircuitSpecFactory
from mixprep.apps.circuits.schemas import CircuitSpecPayload

GEOMETRY = {
    "lengths_a": [1.0, 1.5, 2.0, 2.5],
    "lengths_b": [1.0, 1.5, 2.0, 2.5],
    "l_coh": 1e-4,
    "l_pump": 1e-4,
    "window_T": 1e-9,
}


def run(*args):
    stdout = StringIO()
    call_command(*args, stdout=stdout, stderr=StringIO())
    return stdout.getvalue()


@pytest.fixture
def trivial_circuit(write_json):
    return write_json("circuit.json", {"etas": [1.0] * 6, "theta0": 0.4})


def test_simulate_trivial_circuit_without_geometry(trivial_circuit):
    report = json.loads(run("simulate", trivial_circuit, "--skip-geometry"))
    assert report["F"] == pytest.approx(1.0)
    assert report["coincidence_weights"] == pytest.approx([1, 0, 0, 0])
    assert report["geometry"] == {"valid": True, "checked": False, "violations": []}


def test_simulate_requires_geometry(trivial_circuit):
    with pytest.raises(CommandError) as excinfo:
        run("simulate", trivial_circuit)
    assert excinfo.value.returncode == 2


def test_simulate_with_valid_geometry(write_json):
    circuit = write_json("circuit.json", CircuitSpecPayload.from_domain(CircuitSpecFactory()).model_dump(mode="json"))
    geometry = write_json("geometry.json", GEOMETRY)
    report = json.loads(run("simulate", circuit, "--geometry", geometry))
    assert report["geometry"]["valid"] is True
    assert 0 < report["F"] <= 1
    assert report["survival"] == pytest.approx(1.0)


def test_simulate_rejects_indistinguishable_paths(trivial_circuit, write_json):
    geometry = write_json("geometry.json", {**GEOMETRY, "lengths_a": [1.0] * 4, "lengths_b": [1.0] * 4})
    with pytest.raises(CommandError) as excinfo:
        run("simulate", trivial_circuit, "--geometry", geometry)
    assert excinfo.value.returncode == 4
    assert "INDISTINGUISHABLE_PATHS" in str(excinfo.value)

    report = json.loads(run("simulate", trivial_circuit, "--geometry", geometry, "--skip-geometry"))
    assert report["geometry"]["valid"] is False
    assert "INDISTINGUISHABLE_PATHS" in {v["code"] for v in report["geometry"]["violations"]}


def test_validate_geometry(write_json, tmp_path):
    report = json.loads(run("validate_geometry", write_json("ok.json", GEOMETRY)))
    assert report["valid"] is True

    bad = write_json("bad.json", {**GEOMETRY, "window_T": 2e-9})
    out = tmp_path / "report.json"
    with pytest.raises(CommandError) as excinfo:
        run("validate_geometry", bad, "--out", str(out))
    assert excinfo.value.returncode == 4
    assert json.loads(out.read_text())["violations"][0]["code"] == "WINDOW_TOO_WIDE"


def test_validate_geometry_kappa_override(write_json):
    geometry = write_json("geometry.json", GEOMETRY)
    with pytest.raises(CommandError) as excinfo:
        run("validate_geometry", geometry, "--kappa", "10000")
    assert excinfo.value.returncode == 4
