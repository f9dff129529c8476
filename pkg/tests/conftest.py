import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_square(rng, n, scale=1.0):
    return scale * rng.standard_normal((n, n))


def well_conditioned(rng, n):
    """Random nonsingular matrix with modest condition number."""
    q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    d = np.diag(rng.uniform(1.0, 2.0, size=n))
    return q @ d @ q.T + 0.1 * rng.standard_normal((n, n))
