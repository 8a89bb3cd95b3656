import numpy as np
import pytest

from nsmild import make_grid


@pytest.fixture(scope="session")
def grid3():
    return make_grid(3, 16)


@pytest.fixture(scope="session")
def grid2():
    return make_grid(2, 32)


@pytest.fixture(scope="session")
def grid3_32():
    return make_grid(3, 32)


def pytest_configure(config):
    # keep runs reproducible regardless of ambient state
    np.random.seed(0)
