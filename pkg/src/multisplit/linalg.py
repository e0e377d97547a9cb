"""Dense complex matrix kernel.

Matrices are plain two-dimensional :class:`numpy.ndarray` objects of dtype
``float64`` or ``complex128``.  Every function here is pure; nothing is
modified in place.
"""
from typing import NamedTuple

import warnings

import numpy as np
import scipy.linalg

from .errors import (EigensolverError, NotPositiveDefiniteError,
                     SingularMatrixError)

__all__ = ['as_matrix', 'hermitian_part', 'skew_part', 'symmetrize',
           'is_positive_definite', 'lambda_min', 'spectral_radius',
           'spectral_norm', 'simultaneous_diagonalize', 'CongruencePair',
           'solve_dense', 'factorize', 'LUFactor', 'is_hermitian', 'ctrans']

#: default relative threshold used for "positive definite"
PD_TOL = 1e-10
#: relative pivot threshold below which a matrix counts as singular
PIVOT_TOL = 1e-14


def as_matrix(A, name='A'):
    """Return ``A`` as a finite square float64/complex128 array."""
    A = np.asarray(A)
    if A.ndim == 0:
        A = A.reshape(1, 1)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] == 0:
        raise ValueError(f'{name} must be a non-empty square matrix, '
                         f'got shape {A.shape}')
    dtype = np.result_type(A.dtype, np.float64)
    if dtype not in (np.float64, np.complex128):
        dtype = np.complex128 if np.iscomplexobj(A) else np.float64
    A = A.astype(dtype, copy=False)
    if not np.all(np.isfinite(A)):
        raise ValueError(f'{name} contains NaN or Inf entries')
    return A


def ctrans(A):
    """Conjugate transpose."""
    return A.conj().T


def symmetrize(A):
    """Average ``A`` with its conjugate transpose (exactly Hermitian)."""
    A = as_matrix(A)
    return (A + ctrans(A)) / 2


def hermitian_part(A):
    """Hermitian part ``(A + A^*)/2``.

    >>> hermitian_part([[2, 1], [-1, 2]])
    array([[2., 0.],
           [0., 2.]])
    """
    return symmetrize(A)


def skew_part(A):
    """Skew-Hermitian part ``(A - A^*)/2``; the result ``X`` has ``X^* = -X``
    bit for bit."""
    A = as_matrix(A)
    X = (A - ctrans(A)) / 2
    # enforce exact antisymmetry against rounding in the subtraction
    return (X - ctrans(X)) / 2


def is_hermitian(A, rtol=1e-12):
    A = as_matrix(A)
    scale = np.linalg.norm(A)
    return np.linalg.norm(A - ctrans(A)) <= rtol * max(scale, np.finfo(float).tiny)


def lambda_min(H):
    """Smallest eigenvalue of the Hermitian part of ``H``."""
    try:
        return float(scipy.linalg.eigvalsh(symmetrize(H))[0])
    except np.linalg.LinAlgError as err:
        raise EigensolverError(f'Hermitian eigensolver failed: {err}') from err


def is_positive_definite(A, tol=PD_TOL):
    """Decide whether ``A`` is (non-Hermitian) positive definite.

    The Hermitian part must have smallest eigenvalue above
    ``tol * max(1, ||A||_2)``.

    Returns
    -------
    verdict : bool
    witness : float
        ``lambda_min`` of the Hermitian part, always returned.
    """
    if tol < 0:
        raise ValueError('tol must be nonnegative')
    A = as_matrix(A)
    witness = lambda_min(A)
    return bool(witness > tol * max(1.0, spectral_norm(A))), witness


def spectral_radius(A):
    """Largest eigenvalue modulus, from a dense general eigensolver."""
    A = as_matrix(A)
    try:
        eigs = scipy.linalg.eigvals(A)
    except (np.linalg.LinAlgError, ValueError) as err:
        raise EigensolverError(f'eigensolver did not converge: {err}') from err
    if not np.all(np.isfinite(eigs)):
        raise EigensolverError('eigensolver returned non-finite eigenvalues')
    return float(np.max(np.abs(eigs)))


def spectral_norm(A):
    """Largest singular value."""
    A = as_matrix(A)
    return float(scipy.linalg.svdvals(A)[0])


class CongruencePair(NamedTuple):
    """``A = C^* C`` and ``B = C^* diag(D) C``."""
    C: np.ndarray
    D: np.ndarray


def simultaneous_diagonalize(A, B):
    """Simultaneously diagonalize a Hermitian positive definite ``A`` and a
    Hermitian ``B`` by congruence.

    With ``A = L L^*`` (Cholesky) and ``L^{-1} B L^{-*} = Q D Q^*``
    (unitary diagonalization), ``C = Q^* L^*`` gives ``A = C^* C`` and
    ``B = C^* D C``.
    """
    A = symmetrize(A)
    B = symmetrize(B)
    if A.shape != B.shape:
        raise ValueError('A and B must have the same shape')
    try:
        L = scipy.linalg.cholesky(A, lower=True)
    except np.linalg.LinAlgError as err:
        lam = lambda_min(A)
        raise NotPositiveDefiniteError(
            f'A is not positive definite ({err}); lambda_min = {lam:.3e}',
            witness=lam) from err
    X = scipy.linalg.solve_triangular(L, B, lower=True)
    X = scipy.linalg.solve_triangular(L, ctrans(X), lower=True)
    D, Q = scipy.linalg.eigh((X + ctrans(X)) / 2)
    # fix the free phase of each eigenvector: largest entry real positive
    lead = Q[np.argmax(np.abs(Q), axis=0), np.arange(Q.shape[1])]
    Q = Q * (np.abs(lead) / lead)[None, :]
    C = ctrans(Q) @ ctrans(L)
    return CongruencePair(C=C, D=D)


class LUFactor:
    """Partial-pivoting LU factorization with a singularity check.

    Factor once, then call :meth:`solve` as often as needed.
    """

    def __init__(self, M, pivot_tol=PIVOT_TOL, index=None):
        M = as_matrix(M, 'M')
        self.n = M.shape[0]
        self.dtype = M.dtype
        norm = spectral_norm(M)
        with warnings.catch_warnings():
            # singularity is reported below with the pivot magnitude
            warnings.simplefilter('ignore', scipy.linalg.LinAlgWarning)
            self.lu, self.piv = scipy.linalg.lu_factor(M, check_finite=False)
        pivots = np.abs(np.diag(self.lu))
        self.min_pivot = float(pivots.min())
        if norm == 0 or self.min_pivot <= pivot_tol * norm:
            where = '' if index is None else f' (part {index})'
            raise SingularMatrixError(
                f'matrix is numerically singular{where}: smallest pivot '
                f'{self.min_pivot:.3e}, ||M||_2 = {norm:.3e}',
                pivot=self.min_pivot, index=index)

    def solve(self, rhs):
        rhs = np.asarray(rhs)
        if np.iscomplexobj(rhs) and self.dtype != np.complex128:
            return (scipy.linalg.lu_solve((self.lu, self.piv), rhs.real, check_finite=False)
                    + 1j * scipy.linalg.lu_solve((self.lu, self.piv), rhs.imag,
                                                 check_finite=False))
        return scipy.linalg.lu_solve((self.lu, self.piv), rhs, check_finite=False)


def factorize(M, index=None):
    return LUFactor(M, index=index)


def solve_dense(M, rhs):
    """Solve ``M x = rhs`` by LU with partial pivoting.

    Raises :class:`SingularMatrixError` (carrying the pivot magnitude) when a
    pivot falls below ``1e-14 * ||M||_2``.
    """
    return LUFactor(M).solve(rhs)
