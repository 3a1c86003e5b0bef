import factory
import numpy as np

from mixprep.apps.circuits.geometry import Geometry
from mixprep.apps.circuits.simulator import CircuitSpec
from mixprep.apps.states.factories import LocalUnitaryFactory


def _random_etas(seed):
    return tuple(np.random.default_rng(seed).uniform(0.05, 0.95, size=6))


def _random_sprs(seed):
    return {
        path: (LocalUnitaryFactory(seed=seed * 10 + 2 * path), LocalUnitaryFactory(seed=seed * 10 + 2 * path + 1))
        for path in (1, 2, 3, 4)
    }


class CircuitSpecFactory(factory.Factory):
    """Four-path circuit with random transmissions and local rotations, no filters"""

    class Meta:
        model = CircuitSpec

    class Params:
        seed = factory.Sequence(lambda n: 4000 + n)

    etas = factory.LazyAttribute(lambda o: _random_etas(o.seed))
    theta0 = factory.LazyAttribute(lambda o: float(np.random.default_rng(o.seed + 1).uniform(0, np.pi / 4)))
    sprs = factory.LazyAttribute(lambda o: _random_sprs(o.seed))


class GeometryFactory(factory.Factory):
    """Valid layout: paths 0.5 m apart, 100 um coherence, 1 ns window (0.3 m)"""

    class Meta:
        model = Geometry

    lengths_a = (1.0, 1.5, 2.0, 2.5)
    lengths_b = (1.0, 1.5, 2.0, 2.5)
    l_coh = 1e-4
    l_pump = 1e-4
    window_t = 1e-9
    kappa = 10.0
