"""Reproducible test problems.

Random families draw from :func:`numpy.random.default_rng` (the PCG64
bit generator) seeded with the given integer, so a seed pins down a matrix
exactly on every platform numpy supports.
"""
from dataclasses import asdict, dataclass
from typing import Optional, Tuple, Union

import numpy as np

from .certificates import BlockMatrix
from .linalg import ctrans, is_positive_definite, spectral_norm
from .errors import NotPositiveDefiniteError

__all__ = ['ProblemSpec', 'convection_diffusion', 'random_npd',
           'block_structured', 'random_unitary', 'random_skew', 'generate']

FAMILIES = ('convection_diffusion_1d', 'convection_diffusion_2d', 'random_npd',
            'block_structured')


@dataclass(frozen=True)
class ProblemSpec:
    """Parameters that reproduce one generated problem."""
    family: str
    dims: Tuple[int, ...]
    strength: float = 0.0
    seed: Optional[int] = None
    real: bool = False
    block_size: Optional[int] = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f'unknown family {self.family!r}; expected one of {FAMILIES}')

    def to_dict(self):
        d = asdict(self)
        d['dims'] = list(self.dims)
        return d


def _cd_1d(n, q):
    h = 1.0 / (n + 1)
    delta = q * h / 2
    if not abs(delta) < 1:
        raise ValueError(f'|q h / 2| = {abs(delta):g} must be below 1 '
                         f'(q = {q:g}, h = {h:g})')
    A = (np.diag(np.full(n, 2.0))
         + np.diag(np.full(n - 1, -1.0 + delta), 1)
         + np.diag(np.full(n - 1, -1.0 - delta), -1))
    return A / h ** 2


def convection_diffusion(dims, q=0.0):
    """Centered finite differences for ``-Laplace(u) + q . grad(u)`` on the unit
    interval or square with homogeneous Dirichlet data.

    Parameters
    ----------
    dims : int or (nx,) or (nx, ny)
        interior grid points per direction (each at least 2).
    q : float or (qx, qy)
        drift; ``|q h / 2| < 1`` per direction.

    In 1D the row stencil is ``(-1 - d, 2, -1 + d) / h^2`` with ``d = q h / 2``
    and ``h = 1/(n+1)``.  The 2D matrix is the Kronecker sum of two 1D
    operators (x index varying fastest).
    """
    dims = (dims,) if np.isscalar(dims) else tuple(int(d) for d in dims)
    if any(d < 2 for d in dims):
        raise ValueError('every grid dimension must be at least 2')
    qs = np.broadcast_to(np.asarray(q, dtype=float), (len(dims),))
    if len(dims) == 1:
        return _cd_1d(dims[0], float(qs[0]))
    if len(dims) == 2:
        nx, ny = dims
        Ax = _cd_1d(nx, float(qs[0]))
        Ay = _cd_1d(ny, float(qs[1]))
        return np.kron(np.eye(ny), Ax) + np.kron(Ay, np.eye(nx))
    raise ValueError('only 1D and 2D grids are supported')


def random_unitary(n, rng, real=False):
    Z = rng.standard_normal((n, n))
    if not real:
        Z = Z + 1j * rng.standard_normal((n, n))
    Q, R = np.linalg.qr(Z)
    d = np.diag(R)
    return Q * (d / np.abs(d))[None, :]


def random_skew(n, rng, real=False):
    """Skew-Hermitian matrix of unit spectral norm (zero for ``n = 1`` real)."""
    Z = rng.standard_normal((n, n))
    if not real:
        Z = Z + 1j * rng.standard_normal((n, n))
    W = (Z - ctrans(Z)) / 2
    nrm = spectral_norm(W) if W.any() else 0.0
    return W / nrm if nrm > 0 else W


def random_npd(n, skew_scale=1.0, seed=None, real=False):
    """``Q diag(lam) Q^* + s W``: eigenvalues ``lam`` uniform in ``[1, 10]``,
    ``Q`` Haar-random unitary (orthogonal when ``real``), ``W`` random
    skew-Hermitian with ``||W||_2 = 1``.

    The Hermitian part is ``Q diag(lam) Q^*`` so ``lambda_min(H) >= 1``.
    """
    if n < 1:
        raise ValueError('n must be positive')
    if skew_scale < 0:
        raise ValueError('skew_scale must be nonnegative')
    rng = np.random.default_rng(seed)
    lam = rng.uniform(1.0, 10.0, n)
    Q = random_unitary(n, rng, real)
    W = random_skew(n, rng, real)
    H = (Q * lam[None, :]) @ ctrans(Q)
    H = (H + ctrans(H)) / 2
    return H + skew_scale * W


def _random_normal_block(k, scale, rng, real):
    if scale == 0:
        return np.zeros((k, k), dtype=float if real else complex)
    if real:
        # real symmetric blocks are normal
        Q = random_unitary(k, rng, real=True)
        d = rng.uniform(-1.0, 1.0, k)
    else:
        Q = random_unitary(k, rng)
        d = rng.uniform(0, 1.0, k) * np.exp(2j * np.pi * rng.uniform(size=k))
    d = d * (scale / np.max(np.abs(d)))
    return (Q * d[None, :]) @ ctrans(Q)


def block_structured(m, k, off_scale=0.0, seed=None, real=False,
                     diag_value=None, off_value=None):
    """Block matrix with Hermitian positive definite diagonal blocks
    (eigenvalues in ``[1, 2]``) and normal off-diagonal blocks of spectral
    norm ``off_scale``.

    For ``off_scale < 1/(m-1)`` the result is an extended H-matrix
    (``u = 1`` certifies diagonal dominance).  Passing ``diag_value`` and
    ``off_value`` builds the fixed instance ``diag_value * I`` /
    ``off_value * I`` instead.
    """
    if m < 1 or k < 1:
        raise ValueError('m and k must be positive')
    if diag_value is not None:
        off = 0.0 if off_value is None else off_value
        blocks = np.zeros((m, m, k, k))
        for i in range(m):
            for j in range(m):
                blocks[i, j] = (diag_value if i == j else off) * np.eye(k)
        return BlockMatrix(blocks)
    rng = np.random.default_rng(seed)
    dtype = float if real else complex
    blocks = np.zeros((m, m, k, k), dtype=dtype)
    for i in range(m):
        Q = random_unitary(k, rng, real)
        lam = rng.uniform(1.0, 2.0, k)
        D = (Q * lam[None, :]) @ ctrans(Q)
        blocks[i, i] = (D + ctrans(D)) / 2
        for j in range(m):
            if j != i:
                blocks[i, j] = _random_normal_block(k, off_scale, rng, real)
    return BlockMatrix(blocks)


def generate(spec: ProblemSpec):
    """Build the matrix described by ``spec`` and check positive
    definiteness (dense families only)."""
    if spec.family == 'convection_diffusion_1d':
        A = convection_diffusion(spec.dims[:1], spec.strength)
    elif spec.family == 'convection_diffusion_2d':
        A = convection_diffusion(spec.dims[:2], spec.strength)
    elif spec.family == 'random_npd':
        A = random_npd(spec.dims[0], spec.strength, spec.seed, spec.real)
    else:
        return block_structured(spec.dims[0], spec.block_size or 1, spec.strength,
                                spec.seed, spec.real)
    ok, wit = is_positive_definite(A)
    if not ok:
        raise NotPositiveDefiniteError(f'generated matrix is not positive definite '
                                       f'(lambda_min = {wit:.3e})', witness=wit)
    return A
