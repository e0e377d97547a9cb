"""Sufficient conditions for convergence of splittings and multisplittings,
and the comparison-matrix machinery for block matrices.

Every decision returns a :class:`CertificateResult` whose ``witness`` is the
number the verdict hinges on (a smallest eigenvalue or a norm), so callers
can see how close to the threshold a matrix sits.
"""
import itertools
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.linalg

from .errors import (MembershipError, NonNormalError, NotPositiveDefiniteError,
                     NumericalCheckError, SplittingError)
from .linalg import (PD_TOL, as_matrix, ctrans, factorize, is_positive_definite,
                     lambda_min, solve_dense, spectral_norm, symmetrize)
from .splittings import DIFFERENCE, Multisplitting, Splitting

__all__ = ['CertificateResult', 'BlockMatrix', 'p_regular',
           'p_regular_hermitian_n', 'extended_p_regular', 'yuan_condition',
           'contraction_condition', 'n_psd', 'certify_multisplitting',
           'bracket', 'block_comparison', 'generalized_m_matrix',
           'extended_h_matrix', 'at_family_pd', 'stein_identity_residual',
           'stein_check', 'CONDITIONS']

CERTIFIED = 'certified'
NOT_CERTIFIED = 'not_certified'
UNDECIDED = 'undecided'


@dataclass
class CertificateResult:
    """Outcome of one certificate.

    ``status`` distinguishes a proven failure (``'not_certified'``) from a
    search that ran out of budget (``'undecided'``); ``verdict`` is true only
    for ``'certified'``.
    """
    verdict: bool
    condition_name: str
    witness: float
    detail: list = field(default_factory=list)
    status: str = ''
    u: Optional[np.ndarray] = None
    note: str = ''

    def __post_init__(self):
        if not self.status:
            self.status = CERTIFIED if self.verdict else NOT_CERTIFIED
        if self.verdict != (self.status == CERTIFIED):
            raise ValueError('verdict and status disagree')

    def __bool__(self):
        return self.verdict

    def to_dict(self):
        out = {
            'condition': self.condition_name,
            'verdict': self.verdict,
            'status': self.status,
            'witness': _num(self.witness),
            'per_part': [d.to_dict() if isinstance(d, CertificateResult) else d
                         for d in self.detail],
        }
        if self.u is not None:
            out['u'] = [float(v) for v in self.u]
        if self.note:
            out['note'] = self.note
        return out


def _num(v):
    v = float(v)
    return v if np.isfinite(v) else None


def _pd_result(name, X, tol=PD_TOL):
    ok, wit = is_positive_definite(X, tol)
    return CertificateResult(ok, name, wit)


def _check_difference(s):
    if s.convention != DIFFERENCE:
        raise SplittingError('certificate needs a splitting with A = M - N')


# ---------------------------------------------------------------------------
# single splittings

def p_regular(s: Splitting, tol=PD_TOL):
    """``M^* + N`` positive definite."""
    _check_difference(s)
    return _pd_result('p-regular', ctrans(s.M) + s.N, tol)


def p_regular_hermitian_n(s: Splitting, tol=PD_TOL):
    """P-regular splitting whose ``N`` is Hermitian."""
    base = p_regular(s, tol)
    N = s.N
    scale = np.linalg.norm(N)
    herm = np.linalg.norm(N - ctrans(N)) <= 1e-12 * scale
    note = '' if herm else 'N is not Hermitian'
    return CertificateResult(base.verdict and herm, 'p-regular-hermitian-n',
                             base.witness, note=note)


def extended_p_regular(s: Splitting, tol=PD_TOL):
    """``M^* (A^{-1})^* A + N`` positive definite.

    The equivalent form ``M + N^* (A^{-1})^* A`` is evaluated too; the two
    matrices coincide whenever ``A = M - N``, and their verdicts must agree.
    """
    _check_difference(s)
    A, M, N = s.A, s.M, s.N
    # (A^{-1})^* A = (A^*)^{-1} A
    W = solve_dense(ctrans(A), A)
    X1 = ctrans(M) @ W + N
    X2 = M + ctrans(N) @ W
    r1 = _pd_result('extended-p-regular', X1, tol)
    r2 = _pd_result('extended-p-regular', X2, tol)
    scale = max(1.0, np.linalg.norm(X1))
    if np.linalg.norm(X1 - X2) > 1e-8 * scale or r1.verdict != r2.verdict:
        raise NumericalCheckError(
            'the two forms of the extended P-regular matrix disagree '
            f'(difference {np.linalg.norm(X1 - X2):.3e})')
    return r1


def yuan_condition(s: Splitting, tol=PD_TOL):
    """``M^* M - N^* N`` (which equals ``M^* A + A^* N``) positive definite."""
    _check_difference(s)
    A, M, N = s.A, s.M, s.N
    X = ctrans(M) @ M - ctrans(N) @ N
    Y = ctrans(M) @ A + ctrans(A) @ N
    scale = max(1.0, np.linalg.norm(ctrans(M) @ M) + np.linalg.norm(ctrans(N) @ N))
    if np.linalg.norm(X - Y) > 1e-12 * scale:
        raise NumericalCheckError(
            f'M^*A + A^*N != M^*M - N^*N (difference {np.linalg.norm(X - Y):.3e}); '
            'inconsistent splitting')
    return _pd_result('yuan', X, tol)


def contraction_condition(s: Splitting, tol=1e-12):
    """``||M^{-1} N||_2 < 1`` (strictly, by at least ``tol``)."""
    _check_difference(s)
    norm = spectral_norm(factorize(s.M).solve(s.N))
    return CertificateResult(norm < 1.0 - tol, 'contraction', norm)


def n_psd(s: Splitting, tol=PD_TOL):
    """``N`` Hermitian positive semidefinite."""
    N = s.N
    scale = np.linalg.norm(N)
    herm = np.linalg.norm(N - ctrans(N)) <= 1e-12 * scale
    lam = lambda_min(N)
    ok = herm and lam >= -tol * max(1.0, spectral_norm(N))
    return CertificateResult(bool(ok), 'n-psd', lam,
                             note='' if herm else 'N is not Hermitian')


CONDITIONS = {
    'yuan': yuan_condition,
    'contraction': contraction_condition,
    'extended-p-regular': extended_p_regular,
    'p-regular-hermitian-n': p_regular_hermitian_n,
    'n-psd': n_psd,
}
#: conditions whose multisplitting convergence result also needs A positive definite
_NEED_PD = ('extended-p-regular', 'p-regular-hermitian-n', 'n-psd')


def certify_multisplitting(ms: Multisplitting, which):
    """Apply one per-part condition to every part of ``ms``.

    ``which`` is one of ``'yuan'``, ``'contraction'``,
    ``'extended-p-regular'``, ``'p-regular-hermitian-n'`` or ``'n-psd'``.
    The verdict is the conjunction over parts (plus positive definiteness of
    ``A`` for the last three), and it is only meaningful for scalar weights
    ``E_k = beta_k I``.
    """
    if which not in CONDITIONS:
        raise ValueError(f'unknown condition label {which!r}; '
                         f'expected one of {sorted(CONDITIONS)}')
    if ms.scalar_weights is None:
        raise SplittingError('convergence certificates need E_k = beta_k I')
    fn = CONDITIONS[which]
    detail = [fn(s) for s in ms.splittings()]
    verdict = all(d.verdict for d in detail)
    if which == 'contraction':
        witness = max(d.witness for d in detail)
    else:
        witness = min(d.witness for d in detail)
    note = ''
    if which in _NEED_PD:
        ok, wit = is_positive_definite(ms.A)
        if not ok:
            verdict = False
            note = f'A is not positive definite (lambda_min of H = {wit:.3e})'
    return CertificateResult(verdict, which, witness, detail=detail, note=note)


# ---------------------------------------------------------------------------
# bracket and block comparison matrices

@dataclass(frozen=True, eq=False)
class BlockMatrix:
    """``m x m`` array of ``k x k`` blocks stored as an ``(m, m, k, k)``
    array."""
    blocks: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.blocks)
        if b.ndim != 4 or b.shape[0] != b.shape[1] or b.shape[2] != b.shape[3]:
            raise ValueError(f'blocks must have shape (m, m, k, k), got {b.shape}')
        if b.dtype.kind in 'biu':
            b = b.astype(float)
        object.__setattr__(self, 'blocks', b)

    @property
    def m(self):
        return self.blocks.shape[0]

    @property
    def k(self):
        return self.blocks.shape[2]

    def __getitem__(self, ij):
        return self.blocks[ij]

    def to_dense(self):
        m, k = self.m, self.k
        return self.blocks.transpose(0, 2, 1, 3).reshape(m * k, m * k)

    @classmethod
    def from_dense(cls, A, k):
        A = as_matrix(A)
        n = A.shape[0]
        if n % k:
            raise ValueError(f'dimension {n} is not a multiple of block size {k}')
        m = n // k
        return cls(A.reshape(m, k, m, k).transpose(0, 2, 1, 3).copy())


def _normal_defect(A):
    return np.linalg.norm(ctrans(A) @ A - A @ ctrans(A))


def bracket(A):
    """``<A> = Q |Lambda| Q^*`` for a normal ``A = Q Lambda Q^*``.

    >>> bracket([[0.0, 1.0], [-1.0, 0.0]]).real.round(12)
    array([[1., 0.],
           [0., 1.]])
    """
    A = as_matrix(A)
    scale = np.linalg.norm(A)
    if _normal_defect(A) > 1e-10 * scale ** 2:
        raise NonNormalError('bracket supported for normal matrices only')
    if scale == 0:
        return np.zeros_like(A)
    T, Z = scipy.linalg.schur(A.astype(complex), output='complex')
    absd = np.abs(np.diag(T))
    out = (Z * absd[None, :]) @ ctrans(Z)
    out = (out + ctrans(out)) / 2
    if not np.iscomplexobj(A) and np.all(np.abs(out.imag) <= 1e-14 * max(1.0, scale)):
        out = out.real.copy()
    return out


def block_comparison(A: BlockMatrix):
    """Block comparison matrix: ``(A_ii + A_ii^*)/2`` on the diagonal and
    ``-<A_ij>`` off the diagonal (so the result has nonpositive off-diagonal
    blocks)."""
    m = A.m
    out = np.zeros(A.blocks.shape, dtype=complex)
    for i in range(m):
        ok, wit = is_positive_definite(A[i, i])
        if not ok:
            raise MembershipError(f'diagonal block ({i + 1},{i + 1}) is not positive '
                                  f'definite (lambda_min = {wit:.3e})')
        out[i, i] = symmetrize(A[i, i])
        for j in range(m):
            if i != j:
                try:
                    out[i, j] = -bracket(A[i, j])
                except NonNormalError as err:
                    raise NonNormalError(f'block ({i + 1},{j + 1}): {err}') from err
    if not np.iscomplexobj(A.blocks) and np.all(out.imag == 0):
        out = out.real
    return BlockMatrix(out)


def _check_zhat(A: BlockMatrix, tol=1e-12):
    m = A.m
    for i in range(m):
        for j in range(m):
            X = A[i, j]
            scale = max(1.0, np.linalg.norm(X))
            if np.linalg.norm(X - ctrans(X)) > tol * scale:
                raise MembershipError(f'block ({i + 1},{j + 1}) is not Hermitian')
            if i == j:
                ok, wit = is_positive_definite(X)
                if not ok:
                    raise MembershipError(
                        f'diagonal block ({i + 1},{i + 1}) is not positive definite '
                        f'(lambda_min = {wit:.3e})')
            else:
                top = float(scipy.linalg.eigvalsh(symmetrize(X))[-1])
                if top > 1e-10 * scale:
                    raise MembershipError(
                        f'off-diagonal block ({i + 1},{j + 1}) is not negative '
                        f'semidefinite (lambda_max = {top:.3e})')


def _row_margins(blocks, u):
    """``lambda_min(sum_j u_j A_ij)`` for every block row ``i``."""
    m = blocks.shape[0]
    out = np.empty(m)
    for i in range(m):
        S = np.tensordot(u, blocks[i], axes=(0, 0))
        out[i] = lambda_min(S)
    return out


def _scaled_margin(blocks, u):
    """Smallest row margin for ``u`` normalized to unit maximum."""
    u = np.asarray(u, dtype=float)
    return float(np.min(_row_margins(blocks, u / u.max())))


def _decide_two_blocks(blocks):
    """Exact decision for ``m = 2``.

    With ``u = (s, 1)`` the rows read ``s A_11 + A_12 > 0`` and
    ``s A_21 + A_22 > 0``, i.e. ``s > s_lo`` and ``s < s_hi`` where the bounds
    are extreme generalized eigenvalues.  Feasible iff ``max(s_lo, 0) <
    s_hi``.
    """
    A11, A12 = symmetrize(blocks[0, 0]), symmetrize(blocks[0, 1])
    A21, A22 = symmetrize(blocks[1, 0]), symmetrize(blocks[1, 1])
    s_lo = float(scipy.linalg.eigh(-A12, A11, eigvals_only=True)[-1])
    top = float(scipy.linalg.eigh(-A21, A22, eigvals_only=True)[-1])
    s_hi = np.inf if top <= 0 else 1.0 / top
    lo = max(s_lo, 0.0)
    if lo >= s_hi * (1 - 1e-12):
        return None
    if np.isinf(s_hi):
        s = lo + 1.0 if lo > 0 else 1.0
        s = max(s, 2 * lo)
    else:
        s = (lo + s_hi) / 2 if lo > 0 else s_hi / 2
    return np.array([s, 1.0])


def _decide_scalar_blocks(blocks):
    """Exact decision for ``k = 1``: a Z-matrix with positive diagonal admits
    ``u > 0`` with ``A u > 0`` iff it is a nonsingular M-matrix, in which
    case ``u = A^{-1} 1`` works."""
    A = blocks[:, :, 0, 0].real
    try:
        u = np.linalg.solve(A, np.ones(A.shape[0]))
    except np.linalg.LinAlgError:
        return None
    if np.all(u > 0) and np.all(A @ u > 0):
        return u
    return None


def generalized_m_matrix(A: BlockMatrix, iterations=200, eta=0.5, grid_step=0.05):
    """Search for ``u > 0`` with ``sum_j u_j A_ij`` positive definite for every
    block row.

    The matrix must lie in the class of block matrices with Hermitian blocks,
    negative semidefinite off-diagonal blocks and positive definite diagonal
    blocks.  ``m <= 2`` and ``k = 1`` are decided exactly.  Otherwise a
    multiplicative update of ``u`` runs first and, for ``m <= 4``, an
    exhaustive simplex grid follows; if both fail the result is
    ``'undecided'``.

    Returns
    -------
    CertificateResult
        ``u`` holds the witness vector on success (or the best candidate);
        ``witness`` is the smallest row margin for ``u`` scaled to unit
        maximum.
    """
    _check_zhat(A)
    blocks = A.blocks
    m = A.m
    name = 'generalized-m-matrix'

    exact = None
    if m == 1:
        exact = np.ones(1)
    elif m == 2:
        exact = _decide_two_blocks(blocks)
    elif A.k == 1:
        exact = _decide_scalar_blocks(blocks)
    if m <= 2 or A.k == 1:
        if exact is not None:
            u = exact / exact.max()
            ones_margin = _scaled_margin(blocks, np.ones(m))
            if ones_margin > 0:
                u = np.ones(m)
            margin = _scaled_margin(blocks, u)
            if margin > 0:
                return CertificateResult(True, name, margin, u=u)
        return CertificateResult(False, name, _scaled_margin(blocks, np.ones(m)),
                                 u=np.ones(m), note='proven infeasible')

    u = np.ones(m)
    best_u, best = u.copy(), _scaled_margin(blocks, u)
    if best > 0:
        return CertificateResult(True, name, best, u=best_u)
    for _ in range(iterations):
        r = _row_margins(blocks, u / u.max())
        spread = np.max(np.abs(r))
        if spread == 0:
            break
        deficit = (np.mean(r) - r) / spread
        u = u * (1 + eta * deficit)
        u = np.maximum(u, 1e-12 * u.max())
        u = u / u.max()
        margin = _scaled_margin(blocks, u)
        if margin > best:
            best, best_u = margin, u.copy()
        if best > 0:
            return CertificateResult(True, name, best, u=best_u)

    if m <= 4:
        steps = int(round(1 / grid_step))
        for comp in itertools.product(range(1, steps), repeat=m - 1):
            last = steps - sum(comp)
            if last < 1:
                continue
            cand = np.array(comp + (last,), dtype=float)
            margin = _scaled_margin(blocks, cand)
            if margin > best:
                best, best_u = margin, cand / cand.max()
                if best > 0:
                    return CertificateResult(True, name, best, u=best_u)
    return CertificateResult(False, name, best, u=best_u, status=UNDECIDED,
                             note='undecided-after-budget')


def extended_h_matrix(A: BlockMatrix, **kwargs):
    """Is the block comparison matrix of ``A`` a generalized M-matrix?"""
    res = generalized_m_matrix(block_comparison(A), **kwargs)
    res.condition_name = 'extended-h-matrix'
    return res


# ---------------------------------------------------------------------------
# family A_t, identities

def at_family_pd(B, C, t_samples=64):
    """Check ``A_t = B + B^* - (e^{it} C + e^{-it} C^*)`` positive definite on
    a uniform grid of ``t`` in ``[0, 2 pi)``.

    A positive verdict on all of ``t`` implies ``rho(B^{-1} C) < 1``.
    """
    if t_samples < 8:
        raise ValueError('t_samples must be at least 8')
    B = as_matrix(B, 'B')
    C = as_matrix(C, 'C')
    if B.shape != C.shape:
        raise ValueError('B and C must have the same shape')
    base = B + ctrans(B)
    scale = max(1.0, spectral_norm(base) + 2 * spectral_norm(C))
    worst = np.inf
    for t in 2 * np.pi * np.arange(t_samples) / t_samples:
        z = np.exp(1j * t)
        At = base - (z * C + np.conj(z) * ctrans(C))
        worst = min(worst, lambda_min(At))
    return CertificateResult(bool(worst > PD_TOL * scale), 'at-family-pd', worst)


def stein_identity_residual(A, M, N):
    """Relative Frobenius residual of
    ``A - T^* A T = (I - T^*)(M^* (A^{-1})^* A + N)(I - T)``, ``T = M^{-1} N``.
    """
    A = as_matrix(A)
    M = as_matrix(M, 'M')
    N = as_matrix(N, 'N')
    I = np.eye(A.shape[0])
    T = factorize(M).solve(N)
    W = solve_dense(ctrans(A), A)
    lhs = A - ctrans(T) @ A @ T
    rhs = (I - ctrans(T)) @ (ctrans(M) @ W + N) @ (I - T)
    return float(np.linalg.norm(lhs - rhs) / max(1.0, np.linalg.norm(A)))


def stein_check(A, T):
    """``A^* A - T^* (A^* A) T`` positive definite; true implies
    ``rho(T) < 1`` (Stein)."""
    A = as_matrix(A)
    T = as_matrix(T, 'T')
    factorize(A)
    G = ctrans(A) @ A
    return _pd_result('stein', G - ctrans(T) @ G @ T)
