import numpy as np
import pytest

from acsurf import assemble_stiffness, icosphere


@pytest.fixture(scope="session")
def ico4():
    """Unit icosphere with 2562 vertices, shared across tests."""
    return icosphere(4)


@pytest.fixture(scope="session")
def ico4_op(ico4):
    return assemble_stiffness(ico4)


@pytest.fixture(scope="session")
def ico2():
    """Coarse unit icosphere with 162 vertices."""
    return icosphere(2)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
