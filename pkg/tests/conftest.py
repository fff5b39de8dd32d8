import numpy as np
import pytest

from modsym.verify import random_isometry, random_point, random_tangent


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def rand_point(rng):
    return lambda scale=0.7: random_point(rng, scale)


@pytest.fixture
def rand_tangent(rng):
    return lambda scale=0.7: random_tangent(rng, scale)


@pytest.fixture
def rand_isometry(rng):
    return lambda: random_isometry(rng)
