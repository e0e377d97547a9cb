"""Multisplitting and parallel PSS iterations.

Both engines share the same outer loop: the ``m`` local solves of one sweep
are independent, their results are combined with the weights in ascending
part order, and an optional relaxation ``x <- omega * combined +
(1 - omega) * x`` is applied.  LU factors of every matrix that must be
inverted are computed once before the first sweep.
"""
import csv
import json
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .errors import DivergenceError, NumericalCheckError
from .linalg import as_matrix, factorize, solve_dense, spectral_radius
from .parallel import WorkerPool
from .splittings import Multisplitting, pss_collection

__all__ = ['SolveConfig', 'IterationReport', 'iteration_matrix',
           'lifted_matrices', 'relaxed', 'multisplit_run', 'pss_matrices',
           'pss_run', 'pss_iteration_matrix', 'omega_range']

#: abort when the residual exceeds this multiple of the initial residual
DIVERGENCE_FACTOR = 1e6


@dataclass
class SolveConfig:
    """Stopping and relaxation settings shared by both engines."""
    tol: float = 1e-10
    max_iter: int = 10000
    omega: float = 1.0
    x0: Optional[np.ndarray] = None
    workers: Optional[int] = None
    exact_rho: bool = False
    record_iterates: bool = False

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError(f'tol must be positive, got {self.tol}')
        if self.max_iter < 1:
            raise ValueError(f'max_iter must be at least 1, got {self.max_iter}')
        if self.omega == 0:
            raise ValueError('omega must be nonzero')


@dataclass
class IterationReport:
    """History of one engine run.

    ``residual_history[i]`` is ``||A x_i - b||_2 / ||b||_2`` (absolute when
    ``b = 0``) and includes the initial guess, so it has
    ``iterates_used + 1`` entries.  ``rho_estimate`` is the geometric mean of
    the last five residual ratios.
    """
    iterates_used: int
    residual_history: List[float]
    final_x: np.ndarray
    converged: bool
    rho_estimate: float
    rho_exact: Optional[float] = None
    engine: str = ''
    iterates: Optional[list] = field(default=None, repr=False)

    @property
    def ratios(self):
        r = np.asarray(self.residual_history)
        with np.errstate(divide='ignore', invalid='ignore'):
            return np.where(r[:-1] > 0, r[1:] / r[:-1], np.nan)

    def summary(self):
        """JSON-serializable summary (no arrays larger than the solution)."""
        x = self.final_x
        return {
            'engine': self.engine,
            'converged': self.converged,
            'iterates_used': self.iterates_used,
            'final_residual': self.residual_history[-1],
            'rho_estimate': _json_float(self.rho_estimate),
            'rho_exact': _json_float(self.rho_exact),
            'final_x_real': np.real(x).tolist(),
            'final_x_imag': np.imag(x).tolist() if np.iscomplexobj(x) else None,
        }

    def write_json(self, path):
        with open(path, 'w') as fh:
            json.dump(self.summary(), fh, indent=2, sort_keys=True)
            fh.write('\n')

    def write_csv(self, path):
        """Residual history with columns ``iter, residual, ratio``."""
        ratios = self.ratios
        with open(path, 'w', newline='') as fh:
            w = csv.writer(fh)
            w.writerow(['iter', 'residual', 'ratio'])
            for i, r in enumerate(self.residual_history):
                ratio = '' if i == 0 or not np.isfinite(ratios[i - 1]) else repr(float(ratios[i - 1]))
                w.writerow([i, repr(float(r)), ratio])


def _json_float(v):
    if v is None:
        return None
    v = float(v)
    return v if np.isfinite(v) else None


def omega_range(rho):
    """Open interval ``(0, 2/(1+rho))`` of relaxation parameters that keep a
    contractive base iteration convergent."""
    if not 0 <= rho < 1:
        raise ValueError(f'base iteration not contractive (rho = {rho})')
    return 0.0, 2.0 / (1.0 + rho)


def relaxed(T, omega):
    """``omega * T + (1 - omega) * I``; returns ``T`` itself for ``omega == 1``."""
    T = as_matrix(T)
    if omega == 1:
        return T
    return omega * T + (1 - omega) * np.eye(T.shape[0])


def iteration_matrix(ms: Multisplitting):
    """``T = sum_k E_k M_k^{-1} N_k`` summed in part order."""
    T = None
    for k, (M, N) in enumerate(ms.parts):
        term = ms.weights[k][:, None] * factorize(M, index=k + 1).solve(N)
        T = term if T is None else T + term
    return T


def lifted_matrices(ms: Multisplitting):
    """Block matrices ``B = diag(M_1..M_m)`` and ``C = [N_k E_j]``.

    ``rho(B^{-1} C)`` equals ``rho(T)``.
    """
    n, m = ms.n, ms.m
    dtype = np.result_type(*[M for M, _ in ms.parts], *[N for _, N in ms.parts])
    B = np.zeros((n * m, n * m), dtype=dtype)
    C = np.zeros((n * m, n * m), dtype=dtype)
    for k, (M, N) in enumerate(ms.parts):
        rows = slice(k * n, (k + 1) * n)
        B[rows, rows] = M
        for j in range(m):
            C[rows, j * n:(j + 1) * n] = N * ms.weights[j][None, :]
    return B, C


def _residual_scale(b):
    nb = np.linalg.norm(b)
    return nb if nb > 0 else 1.0


def _estimate_rho(history):
    r = np.asarray(history, dtype=float)
    if len(r) < 2:
        return float('nan')
    prev, cur = r[:-1], r[1:]
    keep = (prev > 0) & (cur > 0)
    ratios = (cur[keep] / prev[keep])[-5:]
    if len(ratios) == 0:
        return 0.0
    return float(np.exp(np.mean(np.log(ratios))))


def _drive(engine, A, b, cfg, local_step, weights, rho_exact_fn):
    """Outer loop shared by both engines.

    ``local_step(k, x)`` returns ``y_k``; ``weights[k]`` multiplies it
    (vector or scalar).
    """
    n = A.shape[0]
    b = np.asarray(b).reshape(-1)
    if b.shape != (n,):
        raise ValueError(f'b has length {b.shape[0]}, expected {n}')
    dtype = np.result_type(A, b, np.float64)
    x = np.zeros(n, dtype=dtype) if cfg.x0 is None else np.array(cfg.x0, dtype=dtype).reshape(-1)
    if x.shape != (n,):
        raise ValueError(f'x0 has length {x.shape[0]}, expected {n}')
    scale = _residual_scale(b)
    omega = cfg.omega

    def residual(x):
        return float(np.linalg.norm(A @ x - b) / scale)

    history = [residual(x)]
    iterates = [x.copy()] if cfg.record_iterates else None
    r0 = history[0]
    m = len(weights)
    converged = history[0] <= cfg.tol
    it = 0
    with WorkerPool(cfg.workers) as pool:
        while not converged and it < cfg.max_iter:
            xi = x
            ys = pool.map(lambda k: local_step(k, xi), range(m))
            acc = weights[0] * ys[0]
            for k in range(1, m):
                acc = acc + weights[k] * ys[k]
            x = acc if omega == 1 else omega * acc + (1 - omega) * xi
            it += 1
            history.append(residual(x))
            if iterates is not None:
                iterates.append(x.copy())
            converged = history[-1] <= cfg.tol
            if not np.isfinite(history[-1]) or history[-1] > DIVERGENCE_FACTOR * r0:
                report = IterationReport(it, history, x, False, _estimate_rho(history),
                                         engine=engine, iterates=iterates)
                raise DivergenceError(
                    f'{engine}: residual grew to {history[-1]:.3e} after {it} '
                    f'iterations (initial {r0:.3e})', report=report)
    report = IterationReport(it, history, x, bool(converged), _estimate_rho(history),
                             engine=engine, iterates=iterates)
    if cfg.exact_rho:
        report.rho_exact = rho_exact_fn()
    return report


def multisplit_run(ms: Multisplitting, b, cfg: SolveConfig = None, **kwargs):
    """Parallel multisplitting iteration.

    Each sweep solves ``M_k y_k = N_k x + b`` for all ``k`` and sets
    ``x <- omega * sum_k E_k y_k + (1 - omega) * x``.

    Parameters
    ----------
    ms : Multisplitting
    b : (n,) array_like
    cfg : SolveConfig, optional
        keyword arguments build one when omitted.

    Raises
    ------
    DivergenceError
        when the residual exceeds ``1e6`` times the initial residual.
    """
    cfg = cfg or SolveConfig(**kwargs)
    factors = [factorize(M, index=k + 1) for k, (M, _) in enumerate(ms.parts)]
    Ns = [N for _, N in ms.parts]
    b = np.asarray(b).reshape(-1)
    if ms.scalar_weights is not None:
        weights = list(ms.scalar_weights)
    else:
        weights = list(ms.weights)

    def step(k, x):
        return factors[k].solve(Ns[k] @ x + b)

    def exact():
        return spectral_radius(relaxed(iteration_matrix(ms), cfg.omega))

    return _drive('multisplit', ms.A, b, cfg, step, weights, exact)


def pss_matrices(p):
    """Iteration matrix ``M(alpha)`` and ``G(alpha)`` of one PSS splitting.

    ``M = (aI+S)^{-1} (aI-P) (aI+P)^{-1} (aI-S)`` and
    ``G = 2a (aI+S)^{-1} (aI+P)^{-1}``; the identity ``M + G A = I`` is
    checked before returning.
    """
    a, P, S = p.alpha, p.P, p.S
    I = np.eye(p.n)
    FP = factorize(a * I + P)
    FS = factorize(a * I + S)
    M = FS.solve((a * I - P) @ FP.solve(a * I - S))
    G = 2 * a * FS.solve(FP.solve(I))
    A = P + S
    err = np.linalg.norm(M + G @ A - I)
    bound = 1e-12 * np.sqrt(p.n) * max(1.0, np.linalg.norm(G, 2) * np.linalg.norm(A, 2))
    if err > bound:
        raise NumericalCheckError(f'M(alpha) + G(alpha) A != I (residual {err:.3e})')
    return M, G


def pss_iteration_matrix(splits, weights=None):
    """``sum_k beta_k M(alpha_k)`` with a fixed-point consistency check
    against a direct solve."""
    splits, betas = pss_collection(splits, weights)
    Mcal = None
    g = None
    A = splits[0].A
    n = splits[0].n
    rhs = np.ones(n)
    for p, beta in zip(splits, betas):
        M, G = pss_matrices(p)
        Mcal = beta * M if Mcal is None else Mcal + beta * M
        g = beta * (G @ rhs) if g is None else g + beta * (G @ rhs)
    xstar = solve_dense(A, rhs)
    err = np.linalg.norm(xstar - (Mcal @ xstar + g))
    if err > 1e-10 * max(1.0, np.linalg.norm(xstar)):
        raise NumericalCheckError(f'fixed point of the PSS iteration is off by {err:.3e}')
    return Mcal


def pss_run(splits, b, cfg: SolveConfig = None, weights=None, **kwargs):
    """Parallel PSS iteration.

    For every part the two half-steps

        (a_k I + P_k) x_half = (a_k I - S_k) x + b
        (a_k I + S_k) y_k    = (a_k I - P_k) x_half + b

    are solved and ``x <- omega * sum_k beta_k y_k + (1 - omega) x``.
    """
    cfg = cfg or SolveConfig(**kwargs)
    splits, betas = pss_collection(splits, weights)
    b = np.asarray(b).reshape(-1)
    n = splits[0].n
    I = np.eye(n)
    fac = []
    for k, p in enumerate(splits):
        a = p.alpha
        fac.append((factorize(a * I + p.P, index=k + 1),
                    factorize(a * I + p.S, index=k + 1),
                    a * I - p.S, a * I - p.P))

    def step(k, x):
        FP, FS, aImS, aImP = fac[k]
        half = FP.solve(aImS @ x + b)
        return FS.solve(aImP @ half + b)

    def exact():
        return spectral_radius(relaxed(pss_iteration_matrix(splits, betas), cfg.omega))

    return _drive('pss', splits[0].A, b, cfg, step, list(betas), exact)
