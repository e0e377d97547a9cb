"""Shift-parameter analysis for PSS iterations.

The contraction bound of one PSS step is ``||V(alpha)||_2`` with
``V(alpha) = (alpha I - P)(alpha I + P)^{-1}``.  This module evaluates that
bound, locates its minimizer over ``alpha > 0`` and tabulates it against the
true spectral radius of the iteration matrix.
"""
import csv
import math
from dataclasses import dataclass, field, asdict
from typing import List

import numpy as np
import scipy.linalg

from .errors import NotPositiveDefiniteError, NumericalCheckError
from .iteration import pss_matrices
from .linalg import (as_matrix, ctrans, factorize, is_positive_definite,
                     spectral_norm, spectral_radius, symmetrize)

__all__ = ['v_alpha_norm', 'f_alpha', 'optimal_alpha', 'AlphaAnalysis',
           'rho_vs_bound_sweep', 'SweepRow', 'write_sweep_csv']

GOLDEN = (math.sqrt(5) - 1) / 2


def _check_pd(P):
    P = as_matrix(P, 'P')
    ok, wit = is_positive_definite(P)
    if not ok:
        raise NotPositiveDefiniteError(
            f'hermitian_part(P) is not positive definite (lambda_min = {wit:.3e})',
            witness=wit)
    return P


def _gk(P, alpha):
    I = np.eye(P.shape[0])
    Gf = alpha * I + P
    Kf = alpha * I - P
    G = ctrans(Gf) @ Gf
    K = ctrans(Kf) @ Kf
    return symmetrize(G), symmetrize(K)


def _v_direct(P, alpha):
    I = np.eye(P.shape[0])
    # V = (aI - P)(aI + P)^{-1}  <=>  V^* = (aI + P)^{-*} (aI - P)^*
    Vh = factorize(ctrans(alpha * I + P)).solve(ctrans(alpha * I - P))
    return spectral_norm(Vh)


def v_alpha_norm(P, alpha):
    """``||(alpha I - P)(alpha I + P)^{-1}||_2``.

    Computed from the singular values of ``V`` and, independently, as
    ``sqrt(rho(G^{-1} K))`` with ``G = (aI+P)^*(aI+P)`` and
    ``K = (aI-P)^*(aI-P)``; the squares of the two must agree to ``1e-10``.
    """
    if not alpha > 0:
        raise ValueError(f'alpha must be positive, got {alpha}')
    P = _check_pd(P)
    direct = _v_direct(P, alpha)
    G, K = _gk(P, alpha)
    mu = float(scipy.linalg.eigh(K, G, eigvals_only=True)[-1])
    if abs(direct ** 2 - mu) > 1e-10:
        raise NumericalCheckError(
            f'||V||^2 = {direct ** 2:.15g} but rho(G^-1 K) = {mu:.15g}')
    return direct


def f_alpha(P, alpha, x):
    """``4 a (x^*Hx) / (a^2 + 2 a (x^*Hx) + x^*P^*Px)`` for a unit vector ``x``.

    For ``x`` the maximizing eigenvector of ``G^{-1} K`` this equals
    ``1 - ||V(alpha)||_2^2``.
    """
    P = as_matrix(P, 'P')
    x = np.asarray(x).reshape(-1)
    if abs(np.linalg.norm(x) - 1) > 1e-10:
        raise ValueError('x must have unit norm')
    if not alpha > 0:
        raise ValueError(f'alpha must be positive, got {alpha}')
    h = float(np.real(np.vdot(x, symmetrize(P) @ x)))
    Px = P @ x
    p = float(np.real(np.vdot(Px, Px)))
    return 4 * alpha * h / (alpha ** 2 + 2 * alpha * h + p)


@dataclass
class AlphaAnalysis:
    """Minimizer of ``||V(alpha)||_2`` and its diagnostics."""
    alpha_star: float
    bound_at_star: float
    sigma_min: float
    sigma_max: float
    fixed_point_residual: float
    maximizing_x: np.ndarray = field(repr=False)
    closed_form_bound: float = float('nan')
    closed_form_agrees: bool = True
    grid_fallback: bool = False
    interval_violation: bool = False
    cluster_size: int = 1

    def to_dict(self):
        d = asdict(self)
        x = d.pop('maximizing_x')
        d['maximizing_x_real'] = np.real(x).tolist()
        d['maximizing_x_imag'] = np.imag(x).tolist()
        return d


def _golden(f, lo, hi, tol):
    a, b = lo, hi
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = f(d)
    x = (a + b) / 2
    return x, f(x)


def _stationary_vector(P, alpha, cluster_tol=1e-6):
    """Unit vector of the top eigenspace of ``K x = mu G x`` at which the
    alpha-derivative of the Rayleigh quotient vanishes."""
    G, K = _gk(P, alpha)
    mu, X = scipy.linalg.eigh(K, G)
    top = mu[-1]
    sel = mu >= top - cluster_tol * max(abs(top), 1e-300)
    Y, _ = np.linalg.qr(X[:, sel])
    if Y.shape[1] == 1:
        x = Y[:, 0]
        return x / np.linalg.norm(x), 1
    H = symmetrize(P)
    I = np.eye(P.shape[0])
    Q = ctrans(Y) @ ((alpha * I - H) - top * (alpha * I + H)) @ Y
    q, V = scipy.linalg.eigh(symmetrize(Q))
    if q[0] <= 0 <= q[-1] and q[-1] > q[0]:
        s2 = -q[0] / (q[-1] - q[0])
        z = math.sqrt(1 - s2) * V[:, 0] + math.sqrt(s2) * V[:, -1]
    else:
        z = V[:, np.argmin(np.abs(q))]
    x = Y @ z
    return x / np.linalg.norm(x), int(Y.shape[1])


def optimal_alpha(P, tol=1e-8, grid_points=1000):
    """Minimize ``||V(alpha)||_2`` over ``alpha > 0``.

    The minimizer lies in ``[sigma_min(P), sigma_max(P)]``; a golden-section
    search runs there to absolute tolerance ``tol``.  The result is checked
    against a coarse grid, and if the grid finds a lower value the search is
    redone on a ``grid_points`` grid (``grid_fallback`` is set).

    At ``alpha*`` the unit vector ``x`` from the top eigenspace of
    ``G^{-1} K`` is extracted, and the report carries
    ``|alpha* - sqrt(x^* P^* P x)|`` together with the bound
    ``sqrt((alpha* - x^*Hx) / (alpha* + x^*Hx))``.
    """
    P = _check_pd(P)
    sv = scipy.linalg.svdvals(P)
    smin, smax = float(sv[-1]), float(sv[0])

    def obj(a):
        return _v_direct(P, a)

    if smax - smin <= tol:
        a_star = (smin + smax) / 2
        val = obj(a_star)
    else:
        a_star, val = _golden(obj, smin, smax, tol)
    fallback = False
    coarse = np.linspace(smin, smax, 33)
    coarse_vals = np.array([obj(a) for a in coarse])
    if smax - smin > tol and coarse_vals.min() < val - 1e-12:
        fallback = True
        grid = np.linspace(smin, smax, grid_points)
        vals = np.array([obj(a) for a in grid])
        i = int(np.argmin(vals))
        lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, grid_points - 1)]
        a_star, val = _golden(obj, lo, hi, tol)
        if vals[i] < val:
            a_star, val = float(grid[i]), float(vals[i])

    eps = 1e-3
    outside = [obj(smin * (1 - eps)), obj(smax * (1 + eps))]
    violation = min(outside) < val - 1e-12

    x, csize = _stationary_vector(P, a_star)
    Px = P @ x
    p = float(np.real(np.vdot(Px, Px)))
    h = float(np.real(np.vdot(x, symmetrize(P) @ x)))
    residual = abs(a_star - math.sqrt(p))
    closed = math.sqrt(max(a_star - h, 0.0) / (a_star + h))
    return AlphaAnalysis(alpha_star=float(a_star), bound_at_star=float(val),
                         sigma_min=smin, sigma_max=smax,
                         fixed_point_residual=residual, maximizing_x=x,
                         closed_form_bound=closed,
                         closed_form_agrees=abs(closed - val) <= 1e-6,
                         grid_fallback=fallback, interval_violation=violation,
                         cluster_size=csize)


@dataclass
class SweepRow:
    """One ``alpha`` of a sweep.

    ``norm_M_weighted`` is ``||(aI+S) M(alpha) (aI+S)^{-1}||_2``, which is
    always bounded by ``norm_V``; the plain ``norm_M`` need not be.
    """
    alpha: float
    rho_M: float
    norm_M: float
    norm_V: float
    norm_M_weighted: float
    is_alpha_star: bool = False

    @property
    def rho_le_norm(self):
        return self.rho_M <= self.norm_M + 1e-12

    @property
    def norm_le_v(self):
        return self.norm_M <= self.norm_V + 1e-12

    @property
    def rho_le_v(self):
        return self.rho_M <= self.norm_V + 1e-12

    @property
    def v_lt_one(self):
        return self.norm_V < 1

    @property
    def chain_holds(self):
        """The full chain ``rho <= ||M|| <= ||V|| < 1``."""
        return self.rho_le_norm and self.norm_le_v and self.v_lt_one


def rho_vs_bound_sweep(p, alpha_grid, strict=False) -> List[SweepRow]:
    """Tabulate ``rho(M(a))``, ``||M(a)||_2`` and ``||V(a)||_2`` over a grid.

    ``p`` is a :class:`~multisplit.splittings.PssSplitting`; its own ``alpha``
    is ignored.  The row with the smallest ``norm_V`` is flagged
    ``is_alpha_star``.  With ``strict=True`` a row violating the chain
    ``rho <= ||M|| <= ||V|| < 1`` raises :class:`NumericalCheckError`.
    """
    rows = []
    I = np.eye(p.n)
    for a in alpha_grid:
        a = float(a)
        if not a > 0:
            raise ValueError(f'alpha must be positive, got {a}')
        q = p.with_alpha(a)
        M, _ = pss_matrices(q)
        W = a * I + q.S
        # (W M) W^{-1} via its adjoint W^{-*} (W M)^*
        Mw = ctrans(factorize(ctrans(W)).solve(ctrans(W @ M)))
        row = SweepRow(alpha=a, rho_M=spectral_radius(M), norm_M=spectral_norm(M),
                       norm_V=_v_direct(q.P, a), norm_M_weighted=spectral_norm(Mw))
        if strict and not row.chain_holds:
            raise NumericalCheckError(
                f'alpha={a:g}: rho={row.rho_M:.6g}, ||M||={row.norm_M:.6g}, '
                f'||V||={row.norm_V:.6g} violates rho <= ||M|| <= ||V|| < 1')
        rows.append(row)
    if rows:
        best = int(np.argmin([r.norm_V for r in rows]))
        rows[best].is_alpha_star = True
    return rows


def write_sweep_csv(rows, path):
    """Columns ``alpha, rho_M, norm_M, norm_V, is_alpha_star``."""
    with open(path, 'w', newline='') as fh:
        w = csv.writer(fh)
        w.writerow(['alpha', 'rho_M', 'norm_M', 'norm_V', 'is_alpha_star'])
        for r in rows:
            w.writerow([repr(r.alpha), repr(r.rho_M), repr(r.norm_M), repr(r.norm_V),
                        int(r.is_alpha_star)])
