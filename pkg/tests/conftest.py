"""Shared fixtures: the preset parameter sets and a lambda sweep."""

import numpy as np
import pytest

from calculations.fgm_joint import BleFgmParams
from data import cache

JOINT_CDF_RATES = {"alpha1": 0.5, "beta1": 1.5, "alpha2": 0.7, "beta2": 2.0}
RELIABILITY_RATES = {"alpha1": 0.05, "beta1": 0.15, "alpha2": 0.07, "beta2": 0.2}
LAMBDA_SWEEP = (-1.0, -0.5, 0.0, 0.5, 1.0)


def _factory(rates: dict):
    def make(lam: float = 0.5) -> BleFgmParams:
        return BleFgmParams.from_rates(
            rates["alpha1"], rates["beta1"], rates["alpha2"], rates["beta2"], lam
        )

    return make


@pytest.fixture
def joint_cdf_params():
    """Factory lam -> params of the joint_cdf preset."""
    return _factory(JOINT_CDF_RATES)


@pytest.fixture
def reliability_params():
    """Factory lam -> params of the reliability preset."""
    return _factory(RELIABILITY_RATES)


@pytest.fixture
def exponential_params():
    """Factory lam -> unit-rate exponential marginals."""
    return _factory({"alpha1": 1.0, "beta1": 0.0, "alpha2": 1.0, "beta2": 0.0})


@pytest.fixture(params=LAMBDA_SWEEP, ids=lambda lam: f"lam={lam:g}")
def lam(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(autouse=True)
def _clear_cache():
    cache.clear()
    yield
    cache.clear()
