"""Shared fixtures: the OU(1, 1) process, the Poisson kernel and the (1 + t)^(-1/2) trend."""
import math

import pytest

from src.tools.kernels import poisson
from src.tools.simulate import SamplingGrid, sample_gaussian_path
from src.tools.spectral_models import frbm, ou
from src.tools.trend import shifted_power

# Closed forms for OU(1, 1) with the Poisson kernel
OU_POISSON_LIMIT = 1.0 / (2.0 * math.pi)
OU_POISSON_SIGMA2 = 5.0 / (4.0 * math.pi ** 2)


@pytest.fixture
def ou_model():
    return ou(1.0, 1.0)


@pytest.fixture
def frbm_model():
    return frbm(0.25, 1.0, 1.0)


@pytest.fixture
def kernel():
    return poisson()


@pytest.fixture
def trend():
    return shifted_power(1.0, 0.5)


@pytest.fixture
def small_grid():
    return SamplingGrid(64.0, 256)


@pytest.fixture
def ou_path(ou_model, small_grid):
    return sample_gaussian_path(ou_model, small_grid, seed=7)
