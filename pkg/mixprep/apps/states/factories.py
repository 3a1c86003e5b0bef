import factory
import numpy as np
from scipy.stats import unitary_group

from mixprep.apps.states.density import DensityMatrix, LocalUnitary, PureState, random_density


class DensityMatrixFactory(factory.Factory):
    """Random density matrix of a chosen rank, reproducible through the seed sequence"""

    class Meta:
        model = DensityMatrix

    class Params:
        rank = 4
        seed = factory.Sequence(lambda n: 1000 + n)

    matrix = factory.LazyAttribute(lambda o: random_density(o.rank, o.seed).matrix)


class LocalUnitaryFactory(factory.Factory):
    class Meta:
        model = LocalUnitary

    class Params:
        seed = factory.Sequence(lambda n: 2000 + n)

    matrix = factory.LazyAttribute(lambda o: unitary_group.rvs(2, random_state=o.seed))


def _random_amplitudes(seed):
    rng = np.random.default_rng(seed)
    amplitudes = rng.normal(size=4) + 1j * rng.normal(size=4)
    return amplitudes / np.linalg.norm(amplitudes)


class PureStateFactory(factory.Factory):
    class Meta:
        model = PureState

    class Params:
        seed = factory.Sequence(lambda n: 3000 + n)

    amplitudes = factory.LazyAttribute(lambda o: _random_amplitudes(o.seed))
