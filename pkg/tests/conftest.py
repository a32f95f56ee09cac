import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("relkit", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("relkit")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def cgauss(rng, rows, cols):
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def hermitian(rng, n):
    m = cgauss(rng, n, n)
    return (m + m.conj().T) / 2
