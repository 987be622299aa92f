import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_unit(rng):
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def random_omega(rng, max_norm=3.0):
    return random_unit(rng) * rng.uniform(0.0, max_norm)


def random_xi(rng, r_max=2.0, t_max=2.0):
    xi = np.empty(9)
    xi[0:6] = rng.uniform(-t_max, t_max, 6)
    xi[6:9] = random_unit(rng) * rng.uniform(0.0, r_max)
    return xi
