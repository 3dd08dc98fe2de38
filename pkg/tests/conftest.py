import numpy as np
import pytest

from bdconvex.bdstate import bd_from_probs


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def rho07():
    return bd_from_probs([0.7, 0.1, 0.1, 0.1])


@pytest.fixture
def sigma_star():
    return bd_from_probs([0.5, 1 / 6, 1 / 6, 1 / 6])
