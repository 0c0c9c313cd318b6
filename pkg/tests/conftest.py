import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from quadrantwalk import HarmonicPolynomial, Uniformization, make_model

settings.register_profile(
    "numeric", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("numeric")


@pytest.fixture(scope="session")
def uniform():
    cache = {}

    def get(n: int) -> Uniformization:
        if n not in cache:
            cache[n] = Uniformization(make_model(n))
        return cache[n]

    return get


@pytest.fixture(scope="session")
def harmonic(uniform):
    cache = {}

    def get(n: int) -> HarmonicPolynomial:
        if n not in cache:
            cache[n] = HarmonicPolynomial(uniform(n))
        return cache[n]

    return get


@pytest.fixture()
def rng():
    return np.random.default_rng(20260811)
