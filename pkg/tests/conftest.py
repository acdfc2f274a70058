import math

import pytest
from hypothesis import HealthCheck, settings

from revhardy.exponents import make_exponents
from revhardy.hardy import power_weights
from revhardy.spaces import make_space

settings.register_profile(
    "default", deadline=None, derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def line():
    return make_space("euclidean:1")


@pytest.fixture(scope="session")
def plane():
    return make_space("euclidean:2")


@pytest.fixture(scope="session")
def heis():
    return make_space("heisenberg:1")


@pytest.fixture(scope="session")
def canonical():
    """Real line, p = q = -1, u = 1, v = |x|^-1: D1 is identically 8."""
    return power_weights(0.0, -1.0), make_exponents(-1.0, -1.0)


def rel(a, b):
    return abs(a - b) / abs(b)


HEIS_AREA = math.pi ** 2 / 2  # 4 * vol of the Koranyi unit ball, pi^2 / 8
