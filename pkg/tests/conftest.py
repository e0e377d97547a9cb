import numpy as np
import pytest

from multisplit import make_multisplitting, random_npd


@pytest.fixture
def scalar_ms():
    """A = 2 split as (3, 1) and (4, 2) with equal weights; T = 5/12."""
    return make_multisplitting([[2.0]], [([[3.0]], [[1.0]]), ([[4.0]], [[2.0]])], [0.5, 0.5])


@pytest.fixture
def A22():
    return np.array([[2.0, 1.0], [-1.0, 2.0]])


def random_multisplitting(n, m, seed, diagonal_weights=False, shift=1.0):
    """Multisplitting of a random positive definite A with M_k = A + N_k."""
    rng = np.random.default_rng(seed)
    A = random_npd(n, 1.0, seed=seed)
    parts = []
    for _ in range(m):
        R = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        N = shift * (R @ R.conj().T) / n
        parts.append((A + N, N))
    if diagonal_weights:
        W = rng.uniform(0.1, 1.0, (m, n))
        W /= W.sum(axis=0)
        weights = list(W)
    else:
        w = rng.uniform(0.2, 1.0, m)
        weights = list(w / w.sum())
    return make_multisplitting(A, parts, weights)
