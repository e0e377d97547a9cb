"""Seeded instances built so that a chosen convergence hypothesis holds.

Each builder returns a scalar-weight multisplitting of a random positive
definite matrix together with the certificate that was made true.
"""
import numpy as np
import scipy.linalg

from multisplit import certify_multisplitting, make_multisplitting, random_npd

CLASSES = ('yuan', 'contraction', 'extended-p-regular', 'p-regular-hermitian-n', 'n-psd')


def _rand(rng, n):
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


def _weights(rng, m):
    w = rng.uniform(0.2, 1.0, m)
    return list(w / w.sum())


def _shift_until(A, X, label, rng):
    """Parts M = X_k + sigma I; grow sigma until every part passes, then add
    10% headroom."""
    n = A.shape[0]
    I = np.eye(n)
    sigma = 0.1
    while True:
        parts = [(Xk + sigma * I, Xk + sigma * I - A) for Xk in X]
        ms = make_multisplitting(A, parts, [1.0 / len(X)] * len(X))
        if certify_multisplitting(ms, label).verdict:
            break
        sigma *= 1.5
    sigma *= 1.1
    return [(Xk + sigma * I, Xk + sigma * I - A) for Xk in X]


def _scale_until(A, R, label):
    """Parts N = c R_k, M = A + N; halve c until every part passes."""
    c = 1.0
    while True:
        parts = [(A + c * Rk, c * Rk) for Rk in R]
        ms = make_multisplitting(A, parts, [1.0 / len(R)] * len(R))
        if certify_multisplitting(ms, label).verdict:
            return parts
        c /= 2


def build(label, n, m, seed):
    """Multisplitting of ``random_npd(n)`` satisfying ``label`` per part."""
    rng = np.random.default_rng(seed)
    A = random_npd(n, float(rng.uniform(0.5, 5.0)), seed=seed)
    if label in ('yuan', 'contraction'):
        # structured parts: a random triangle of A plus noise
        X = []
        for _ in range(m):
            tri = np.triu(A) if rng.random() < 0.5 else np.tril(A)
            X.append(tri + 0.3 * _rand(rng, n))
        parts = _shift_until(A, X, label, rng)
    elif label == 'extended-p-regular':
        parts = _scale_until(A, [_rand(rng, n) for _ in range(m)], label)
    elif label == 'p-regular-hermitian-n':
        H = (A + A.conj().T) / 2
        Hi = np.linalg.inv(scipy.linalg.sqrtm(H))
        parts = []
        for _ in range(m):
            R = _rand(rng, n)
            R = (R + R.conj().T) / 2
            lo = np.linalg.eigvalsh(Hi @ R @ Hi)[0]
            c = rng.uniform(0.1, 1.0) * (0.5 / abs(lo) if lo < 0 else 1.0)
            N = c * R
            N = (N + N.conj().T) / 2
            parts.append((A + N, N))
    elif label == 'n-psd':
        parts = []
        for _ in range(m):
            R = _rand(rng, n)
            N = rng.uniform(0.1, 2.0) * (R @ R.conj().T) / n
            N = (N + N.conj().T) / 2
            parts.append((A + N, N))
    else:
        raise ValueError(label)
    ms = make_multisplitting(A, parts, _weights(rng, m))
    return ms


def suite(n_instances=30, seed0=0):
    """``(label, ms)`` pairs: ``n_instances`` per class, n in {4, 8, 16},
    m in {2, 3}."""
    out = []
    for label in CLASSES:
        for i in range(n_instances):
            n = (4, 8, 16)[i % 3]
            m = (2, 3)[(i // 3) % 2]
            out.append((label, build(label, n, m, seed0 + 1000 * CLASSES.index(label) + i)))
    return out
