import json
from dataclasses import dataclass

import django.conf
import numpy as np
import pytest

from mixprep.apps.states.density import DensityMatrix, PureState


@pytest.fixture
def bell_state():
    return PureState.schmidt(np.pi / 4)


@pytest.fixture
def werner_state():
    # Concurrence 0.7
    return DensityMatrix.werner(0.8)


@pytest.fixture
def bell_mixture():
    """60:40 mixture of |Phi+> and |Psi+>: rank 2, concurrence 0.2"""
    phi_plus = PureState.schmidt(np.pi / 4)
    psi_plus = PureState(np.array([0, 1, 1, 0]) / np.sqrt(2))
    return DensityMatrix.mixture([0.6, 0.4], [phi_plus, psi_plus])


@pytest.fixture
def rng():
    return np.random.default_rng(20020101)


@dataclass
class ProjectFixture:
    settings: django.conf.Settings
    bell: PureState
    werner: DensityMatrix
    mixture: DensityMatrix


@pytest.fixture
def project_fixture_common(settings, bell_state, werner_state, bell_mixture):
    return ProjectFixture(settings=settings, bell=bell_state, werner=werner_state, mixture=bell_mixture)


@pytest.fixture
def write_json(tmp_path):
    """Write a JSON document under tmp_path and return its path as a string"""

    def write(name, document):
        path = tmp_path / name
        path.write_text(json.dumps(document))
        return str(path)

    return write
