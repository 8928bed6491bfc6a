import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from scipy.stats import special_ortho_group

settings.register_profile(
    "numerics", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("numerics")


def rotation(n, rng):
    if n == 1:
        return np.ones((1, 1))
    return special_ortho_group.rvs(n, random_state=rng)


def random_sl(n, rng):
    g = rng.standard_normal((n, n))
    if np.linalg.det(g) < 0:
        g[0] *= -1
    return g / np.linalg.det(g) ** (1.0 / n)


def diag_det1(values):
    v = np.asarray(values, dtype=float)
    return v / np.exp(np.mean(np.log(v)))


def projector(basis, c):
    q = basis[:, :c]
    return q @ q.T


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
