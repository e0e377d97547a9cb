"""Single splittings, multisplittings and PSS triples.

A :class:`Splitting` pairs ``(M, N)`` with its matrix ``A`` under one of two
sign conventions: ``'difference'`` (``A = M - N``, the stationary iteration
``x <- M^{-1}(N x + b)``) or ``'sum'`` (``A = M + N``, the generating form of
a positive-definite/skew-Hermitian splitting).
"""
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import (BoundError, InconsistentSplittingError,
                     NotPositiveDefiniteError, SingularMatrixError,
                     SplittingError, WeightError)
from .linalg import (as_matrix, ctrans, factorize, is_positive_definite,
                     lambda_min, skew_part)

__all__ = ['Splitting', 'Multisplitting', 'PssSplitting', 'HadjidimosParams',
           'make_multisplitting', 'hadjidimos_multisplitting', 'hadjidimos_bounds', 'ps_split',
           'ts_split', 'bts_split', 'pss_collection']

DIFFERENCE = 'difference'
SUM = 'sum'

#: relative tolerance on reconstructing A from a splitting
RECON_TOL = 1e-12
#: absolute tolerance on sum(E_k) == I
WEIGHT_TOL = 1e-13


def _recon_error(A, M, N, convention):
    R = A - (M - N) if convention == DIFFERENCE else A - (M + N)
    # rounding in M -/+ N scales with the largest operand
    scale = max(np.linalg.norm(A), np.linalg.norm(M), np.linalg.norm(N))
    return np.linalg.norm(R), scale


@dataclass(frozen=True, eq=False)
class Splitting:
    """A splitting of ``A`` into ``(M, N)``; ``M`` must be nonsingular."""
    A: np.ndarray
    M: np.ndarray
    N: np.ndarray
    convention: str = DIFFERENCE

    def __post_init__(self):
        if self.convention not in (DIFFERENCE, SUM):
            raise ValueError(f'unknown convention {self.convention!r}')
        A = as_matrix(self.A)
        M = as_matrix(self.M, 'M')
        N = as_matrix(self.N, 'N')
        if not A.shape == M.shape == N.shape:
            raise ValueError('A, M and N must have matching shapes')
        err, scale = _recon_error(A, M, N, self.convention)
        if err > RECON_TOL * scale:
            sign = '-' if self.convention == DIFFERENCE else '+'
            raise InconsistentSplittingError(
                f'A != M {sign} N: residual {err:.3e} > {RECON_TOL:g}*||A||_F')
        factorize(M)
        object.__setattr__(self, 'A', A)
        object.__setattr__(self, 'M', M)
        object.__setattr__(self, 'N', N)

    @property
    def n(self):
        return self.A.shape[0]

    def iteration_matrix(self):
        """``M^{-1} N``."""
        return factorize(self.M).solve(self.N)


@dataclass(frozen=True, eq=False)
class Multisplitting:
    """Validated collection ``(M_k, N_k, E_k)``, ``A = M_k - N_k``.

    ``weights`` holds the diagonals of the ``E_k`` as length-``n`` vectors.
    ``scalar_weights`` is the tuple of ``beta_k`` when every ``E_k`` is a
    multiple of the identity, otherwise ``None``.
    """
    A: np.ndarray
    parts: tuple
    weights: tuple
    scalar_weights: Optional[tuple] = None

    @property
    def m(self):
        return len(self.parts)

    @property
    def n(self):
        return self.A.shape[0]

    def E(self, k):
        return np.diag(self.weights[k])

    def splittings(self):
        return [Splitting(self.A, M, N) for M, N in self.parts]


def _weight_vector(w, n, k):
    w = np.asarray(w)
    if np.iscomplexobj(w):
        if np.any(w.imag != 0):
            raise WeightError(f'E_{k + 1} has complex entries')
        w = w.real
    w = w.astype(float)
    if w.ndim == 0:
        return np.full(n, float(w))
    if w.ndim == 1:
        if w.shape != (n,):
            raise WeightError(f'E_{k + 1} diagonal has length {w.shape[0]}, expected {n}')
        return w.copy()
    if w.shape != (n, n):
        raise WeightError(f'E_{k + 1} has shape {w.shape}, expected {(n, n)}')
    off = w - np.diag(np.diag(w))
    if np.any(off != 0):
        raise WeightError(f'E_{k + 1} is not diagonal')
    return np.diag(w).copy()


def make_multisplitting(A, parts, weights):
    """Build and validate a multisplitting.

    Parameters
    ----------
    A : (n, n) array_like
    parts : sequence of (M_k, N_k) pairs with ``A = M_k - N_k``
    weights : sequence of scalars ``beta_k``, diagonal vectors or diagonal
        matrices ``E_k``

    Raises
    ------
    WeightError
        negative entry, non-diagonal ``E_k`` or ``sum E_k != I``.
    SingularMatrixError
        some ``M_k`` is singular.
    InconsistentSplittingError
        ``A != M_k - N_k`` for some ``k``.
    """
    A = as_matrix(A)
    n = A.shape[0]
    parts = list(parts)
    weights = list(weights)
    if not parts:
        raise SplittingError('a multisplitting needs at least one part')
    if len(parts) != len(weights):
        raise SplittingError(f'{len(parts)} parts but {len(weights)} weights')

    vecs = [_weight_vector(w, n, k) for k, w in enumerate(weights)]
    for k, v in enumerate(vecs):
        if np.any(v < 0):
            raise WeightError(f'E_{k + 1} has a negative entry ({v.min():g})')
    total = np.sum(vecs, axis=0)
    if np.max(np.abs(total - 1.0)) > WEIGHT_TOL:
        raise WeightError(f'weights sum != I (max deviation '
                          f'{np.max(np.abs(total - 1.0)):.3e})')

    checked = []
    for k, (M, N) in enumerate(parts):
        M = as_matrix(M, f'M_{k + 1}')
        N = as_matrix(N, f'N_{k + 1}')
        if M.shape != A.shape or N.shape != A.shape:
            raise SplittingError(f'part {k + 1} has mismatched dimensions')
        try:
            factorize(M, index=k + 1)
        except SingularMatrixError as err:
            raise SingularMatrixError(f'singular M_k: {err}', pivot=err.pivot,
                                      index=k + 1) from err
        err, scale = _recon_error(A, M, N, DIFFERENCE)
        if err > RECON_TOL * scale:
            raise InconsistentSplittingError(
                f'A != M_{k + 1} - N_{k + 1}: residual {err:.3e}')
        checked.append((M, N))

    scalar = None
    if all(np.all(v == v[0]) for v in vecs):
        betas = tuple(float(v[0]) for v in vecs)
        if all(b > 0 for b in betas):
            scalar = betas
    return Multisplitting(A=A, parts=tuple(checked), weights=tuple(vecs),
                          scalar_weights=scalar)


@dataclass(frozen=True)
class HadjidimosParams:
    """Eigen-bound witnesses of the triangular-shift construction."""
    m: int
    rho: tuple
    lambda_m: float
    eta_m: float
    theta_m: float

    @property
    def lower_bounds(self):
        """Lower bounds on the shifts for the two halves of the parts."""
        lo_first = max(0.0, -self.eta_m / self.lambda_m)
        lo_second = max(0.0, -self.theta_m / self.lambda_m)
        return lo_first, lo_second


def _dlu(A):
    return np.diag(np.diag(A)), -np.tril(A, -1), -np.triu(A, 1)


def hadjidimos_witnesses(A):
    """``(lambda, eta, theta)`` for ``A = D - L - U``: smallest eigenvalues of
    ``A + A^T``, ``(D-L)(D-L)^T - U U^T`` and ``(D-U)(D-U)^T - L L^T``."""
    A = np.real_if_close(as_matrix(A))
    D, L, U = _dlu(A)
    return (lambda_min(A + A.T), lambda_min((D - L) @ (D - L).T - U @ U.T),
            lambda_min((D - U) @ (D - U).T - L @ L.T))


def hadjidimos_bounds(A):
    """Lower bounds on the shifts of the first and second half of the parts."""
    lam, eta, theta = hadjidimos_witnesses(A)
    return HadjidimosParams(1, (), lam, eta, theta).lower_bounds


def hadjidimos_multisplitting(A, rho, weights=None):
    """Triangular-shift multisplitting of a real positive definite matrix.

    With ``A = D - L - U`` (diagonal, strictly lower, strictly upper),
    part ``k <= m`` is ``M_k = D + rho_k I - L, N_k = rho_k I + U`` and part
    ``k > m`` is ``M_k = D + rho_k I - U, N_k = rho_k I + L``.  Every shift
    must exceed ``max(0, -eta/lambda)`` (first half) or
    ``max(0, -theta/lambda)`` (second half) where ``lambda`` is the smallest
    eigenvalue of ``A + A^T`` and ``eta``, ``theta`` are the smallest
    eigenvalues of ``(D-L)(D-L)^T - U U^T`` and ``(D-U)(D-U)^T - L L^T``.
    Under these bounds ``||M_k^{-1} N_k||_2 < 1`` for every part.

    Parameters
    ----------
    A : (n, n) real array_like
    rho : sequence of 2m shifts
    weights : sequence of 2m positive scalars summing to one; equal by
        default.
    """
    A = as_matrix(A)
    if np.iscomplexobj(A):
        if np.any(A.imag != 0):
            raise SplittingError('the triangular-shift construction needs a real matrix')
        A = A.real
    ok, wit = is_positive_definite(A)
    if not ok:
        raise NotPositiveDefiniteError(
            f'A is not positive definite (lambda_min of H = {wit:.3e})', witness=wit)
    rho = [float(r) for r in rho]
    if len(rho) == 0 or len(rho) % 2:
        raise SplittingError(f'rho must have even length 2m, got {len(rho)}')
    m = len(rho) // 2
    if weights is None:
        weights = [1.0 / (2 * m)] * (2 * m)
    if len(weights) != 2 * m:
        raise SplittingError(f'expected {2 * m} weights, got {len(weights)}')

    lam, eta, theta = hadjidimos_witnesses(A)
    params = HadjidimosParams(m=m, rho=tuple(rho), lambda_m=lam,
                              eta_m=eta, theta_m=theta)
    lo_first, lo_second = params.lower_bounds
    I = np.eye(A.shape[0])
    D, L, U = _dlu(A)

    parts = []
    for k, r in enumerate(rho):
        bound = lo_first if k < m else lo_second
        # strict inequality made numerically strict
        if r < bound + 1e-8 * max(1.0, abs(bound)):
            raise BoundError(f'rho below bound {bound:g} (rho_{k + 1} = {r:g})',
                             bound=bound, index=k + 1)
        if k < m:
            parts.append((D + r * I - L, r * I + U))
        else:
            parts.append((D + r * I - U, r * I + L))
    return make_multisplitting(A, parts, weights), params


@dataclass(frozen=True, eq=False)
class PssSplitting:
    """``A = P + S`` with ``P`` positive definite and ``S`` skew-Hermitian,
    together with the shift ``alpha > 0`` used by the PSS half-steps.

    ``origin`` keeps the generating pair ``(M, N)`` with ``A = M + N`` when
    the triple came from :func:`ps_split`.
    """
    P: np.ndarray
    S: np.ndarray
    alpha: float
    origin: Optional[tuple] = field(default=None, repr=False)

    def __post_init__(self):
        P = as_matrix(self.P, 'P')
        S = as_matrix(self.S, 'S')
        if P.shape != S.shape:
            raise ValueError('P and S must have matching shapes')
        if not self.alpha > 0:
            raise ValueError(f'alpha must be positive, got {self.alpha}')
        if np.any(ctrans(S) != -S):
            raise SplittingError('S is not exactly skew-Hermitian')
        ok, wit = is_positive_definite(P)
        if not ok:
            raise NotPositiveDefiniteError(
                f'hermitian_part(P) is not positive definite (lambda_min = {wit:.3e}); '
                'A was not positive definite', witness=wit)
        object.__setattr__(self, 'P', P)
        object.__setattr__(self, 'S', S)
        object.__setattr__(self, 'alpha', float(self.alpha))

    @property
    def A(self):
        return self.P + self.S

    @property
    def n(self):
        return self.P.shape[0]

    def with_alpha(self, alpha):
        return PssSplitting(self.P, self.S, alpha, self.origin)


def ps_split(A, N, alpha):
    """PS splitting generated by ``A = M + N``: ``S = N - N^*`` and
    ``P = M + N^* = A - S``.

    >>> p = ps_split([[2, 1], [-1, 2]], [[0, 1], [0, 0]], alpha=1.0)
    >>> p.P
    array([[2., 0.],
           [0., 2.]])
    """
    if not alpha > 0:
        raise ValueError(f'alpha must be positive, got {alpha}')
    A = as_matrix(A)
    N = as_matrix(N, 'N')
    if N.shape != A.shape:
        raise ValueError('N must have the shape of A')
    M = A - N
    if not np.any(N):
        raise SplittingError('N must be nonzero')
    if not np.any(M):
        raise SplittingError('M = A - N must be nonzero')
    S = 2 * skew_part(N)
    P = A - S
    if np.linalg.norm(P + S - A) > RECON_TOL * np.linalg.norm(A):
        raise InconsistentSplittingError('P + S does not reproduce A')
    return PssSplitting(P=P, S=S, alpha=alpha, origin=(M, N))


_PARTITIONS = ('strict-upper', 'strict-lower')


def ts_split(A, partition='strict-upper', alpha=1.0):
    """Triangular PS splitting: ``N`` is the strictly upper or strictly lower
    triangular part of ``A``."""
    A = as_matrix(A)
    if partition == 'strict-upper':
        N = np.triu(A, 1)
    elif partition == 'strict-lower':
        N = np.tril(A, -1)
    else:
        raise ValueError(f'partition must be one of {_PARTITIONS}, got {partition!r}')
    return ps_split(A, N, alpha)


def _block_mask(block_sizes, n):
    sizes = [int(s) for s in block_sizes]
    if any(s <= 0 for s in sizes) or sum(sizes) != n:
        raise ValueError(f'block_sizes {sizes} must be positive and sum to {n}')
    ids = np.repeat(np.arange(len(sizes)), sizes)
    return ids[:, None], ids[None, :]


def bts_split(A, block_sizes, partition='strict-upper', alpha=1.0):
    """Block-triangular PS splitting over contiguous diagonal blocks."""
    A = as_matrix(A)
    row, col = _block_mask(block_sizes, A.shape[0])
    if partition == 'strict-upper':
        N = np.where(row < col, A, 0)
    elif partition == 'strict-lower':
        N = np.where(row > col, A, 0)
    else:
        raise ValueError(f'partition must be one of {_PARTITIONS}, got {partition!r}')
    return ps_split(A, N, alpha)


def pss_collection(splits: Sequence[PssSplitting], weights=None):
    """Validate a parallel-PSS collection; returns ``(splits, betas)``.

    All splittings must describe the same ``A`` and the scalar weights must
    be positive and sum to one.
    """
    splits = list(splits)
    if not splits:
        raise SplittingError('empty PSS collection')
    if weights is None:
        weights = [1.0 / len(splits)] * len(splits)
    betas = tuple(float(w) for w in weights)
    if len(betas) != len(splits):
        raise SplittingError(f'{len(splits)} splittings but {len(betas)} weights')
    if any(b <= 0 for b in betas):
        raise WeightError('PSS weights must be positive')
    if abs(sum(betas) - 1.0) > WEIGHT_TOL:
        raise WeightError(f'weights sum != 1 ({sum(betas)!r})')
    A0 = splits[0].A
    scale = np.linalg.norm(A0)
    for k, s in enumerate(splits[1:], start=2):
        if s.n != splits[0].n or np.linalg.norm(s.A - A0) > RECON_TOL * scale:
            raise InconsistentSplittingError(f'PSS part {k} splits a different matrix')
    return splits, betas
