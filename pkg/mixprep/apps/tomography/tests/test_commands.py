import json
from io import StringIO

import pytest
from django.core.management import call_command
from django.core.management.base import CommandError

from mixprep.apps.states.schemas import DensityMatrixPayload
from mixprep.apps.tomography.schemas import CountRecordPayload


def run(*args):
    stdout = StringIO()
    call_command(*args, stdout=stdout, stderr=StringIO())
    return stdout.getvalue()


@pytest.fixture
def werner_path(write_json, werner_state):
    return write_json("werner.json", DensityMatrixPayload.from_domain(werner_state).model_dump())


def test_exact_tomography(werner_path):
    report = json.loads(run("tomo", werner_path, "--shots", "0"))
    assert report["fidelity"] == pytest.approx(1.0, abs=1e-9)
    assert report["shots_per_setting"] == 0
    assert report["seed"] is None


def test_tomography_is_reproducible(werner_path):
    first = run("tomo", werner_path, "--shots", "2000", "--seed", "5")
    second = run("tomo", werner_path, "--shots", "2000", "--seed", "5")
    assert first == second
    assert json.loads(first)["seed"] == 5
    assert first != run("tomo", werner_path, "--shots", "2000", "--seed", "6")


def test_tomography_writes_counts_and_manifest(werner_path, tmp_path):
    out = tmp_path / "tomo.json"
    run("tomo", werner_path, "--shots", "100000", "--out", str(out))
    assert json.loads(out.read_text())["fidelity"] >= 0.99

    lines = (tmp_path / "tomo.counts.jsonl").read_text().splitlines()
    records = [CountRecordPayload.model_validate_json(line).to_domain() for line in lines]
    assert len(records) == 9
    assert all(record.total == 100000 for record in records)

    manifest = json.loads((tmp_path / "tomo.json.manifest.json").read_text())
    assert manifest["outputs"] == [
        str(tmp_path / "tomo.counts.jsonl"),
        str(out),
        str(tmp_path / "tomo.json.manifest.json"),
    ]


def test_tomography_rejects_negative_shots(werner_path):
    with pytest.raises(CommandError) as excinfo:
        run("tomo", werner_path, "--shots", "-1")
    assert excinfo.value.returncode == 2
