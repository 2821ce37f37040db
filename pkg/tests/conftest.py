import numpy as np
import pytest

from sepsym.space import ConfigSpace


@pytest.fixture
def space3():
    return ConfigSpace(3)


@pytest.fixture
def space4():
    return ConfigSpace(4)


@pytest.fixture
def grid8():
    return ConfigSpace(8, grid=True)


@pytest.fixture
def spin_space():
    return ConfigSpace(8, factors=(2, 4), grid=True)


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)
