import numpy as np
import pytest

from cknlab.grids import RadialGrid
from cknlab.params import derive_params

# Admissible triples exercised throughout: Sobolev cases, a d=2 pair, and
# fractional intrinsic dimensions.
FIVE_TRIPLES = [
    (0.0, 0.0, 3),
    (-0.5, 0.0, 3),
    (0.0, 0.0, 4),
    (-0.3, 0.2, 2),
    (0.1, 0.3, 5),
]

SWEEP_TRIPLES = [(0.0, 0.0, 3), (-0.5, 0.0, 3), (-0.3, 0.2, 2)]


@pytest.fixture(scope="session")
def ps_n6():
    """(a, b, d) = (-1/2, 0, 3): n = 6, alpha = 1/2, symmetric."""
    return derive_params(-0.5, 0.0, 3)


@pytest.fixture(scope="session")
def ps_sobolev3():
    return derive_params(0.0, 0.0, 3)


@pytest.fixture(scope="session")
def ps_d2():
    """(a, b, d) = (-0.3, 0.2, 2): n = 4, alpha = 0.3, symmetric."""
    return derive_params(-0.3, 0.2, 2)


@pytest.fixture(scope="session")
def grid_default():
    return RadialGrid(1e-3, 1e3, 2048)


@pytest.fixture(scope="session")
def grid_small():
    return RadialGrid(1e-2, 1e2, 512)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240601)
