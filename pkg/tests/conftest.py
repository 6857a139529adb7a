from pathlib import Path
import sys

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_spd(rng, dim, floor=0.5):
    factor = rng.normal(size=(dim, dim))
    return factor @ factor.T + floor * np.eye(dim)


@pytest.fixture
def spd_factory(rng):
    return lambda dim: random_spd(rng, dim)


def random_mixture(rng, dim, size, generator=None):
    from mixot.atoms import Atom, gaussian_profile
    from mixot.mixtures import Mixture

    generator = generator or gaussian_profile(dim)
    atoms = tuple(Atom(generator, 3.0 * rng.normal(size=dim), random_spd(rng, dim)) for _ in range(size))
    return Mixture(rng.dirichlet(np.ones(size)), atoms)
