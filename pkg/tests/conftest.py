import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_hermitian(rng, n, complex_scalars=False, scale=1.0):
    A = rng.standard_normal((n, n))
    if complex_scalars:
        A = A + 1j * rng.standard_normal((n, n))
    return scale * (A + A.conj().T) / 2.0


def random_full_rank(rng, m, n, complex_scalars=False):
    while True:
        G = rng.standard_normal((m, n))
        if complex_scalars:
            G = G + 1j * rng.standard_normal((m, n))
        if np.linalg.matrix_rank(G) == n:
            return np.asfortranarray(G)
