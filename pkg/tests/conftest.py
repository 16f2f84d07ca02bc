import numpy as np
import pytest

from twistcc.geometry import PotentialParams


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture
def newton():
    return PotentialParams(3.0)
