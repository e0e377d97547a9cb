"""Acceptance suite: one PASS/FAIL line per criterion.

Run under pytest (lines are printed to the terminal even when output is
captured) or directly with ``python3 tests/test_acceptance.py``.
"""
import os
import sys
import time

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

import instances  # noqa: E402
from multisplit import (BlockMatrix, SolveConfig, at_family_pd, block_comparison,  # noqa: E402
                        bracket, certify_multisplitting, convection_diffusion,
                        extended_h_matrix, generalized_m_matrix, hadjidimos_multisplitting,
                        iteration_matrix, stein_identity_residual, lifted_matrices,
                        make_multisplitting, multisplit_run, optimal_alpha, pss_iteration_matrix,
                        pss_run, random_npd, relaxed, spectral_radius, ts_split, bts_split,
                        v_alpha_norm)
from multisplit.iteration import omega_range  # noqa: E402
from multisplit.problems import random_unitary  # noqa: E402
from multisplit.pss_params import rho_vs_bound_sweep  # noqa: E402

ALPHAS = (0.1, 0.5, 1.0, 2.0, 5.0, 10.0)
_SUITE = None


def suite():
    global _SUITE
    if _SUITE is None:
        _SUITE = instances.suite(30)
    return _SUITE


def _rand(rng, n):
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


# ---------------------------------------------------------------- criteria

def c1_implications():
    worst = {}
    for label, ms in suite():
        if not certify_multisplitting(ms, label).verdict:
            return False, f'{label}: constructed instance failed its certificate'
        worst[label] = max(worst.get(label, 0.0), spectral_radius(iteration_matrix(ms)))
    ok = all(r <= 1 - 1e-8 for r in worst.values())
    return ok, 'max rho(T): ' + ', '.join(f'{k}={v:.4f}' for k, v in worst.items()), 60


def c2_lifted():
    worst = 0.0
    for seed in range(50):
        rng = np.random.default_rng(seed)
        n, m = int(rng.integers(2, 9)), int(rng.integers(1, 4))
        A = random_npd(n, 2.0, seed=seed)
        parts = []
        for _ in range(m):
            N = 0.5 * _rand(rng, n)
            parts.append((A + N, N))
        if seed % 2:
            W = rng.uniform(0.05, 1.0, (m, n))
            weights = list(W / W.sum(axis=0))
        else:
            w = rng.uniform(0.1, 1.0, m)
            weights = list(w / w.sum())
        ms = make_multisplitting(A, parts, weights)
        B, C = lifted_matrices(ms)
        rt = spectral_radius(iteration_matrix(ms))
        rl = spectral_radius(np.linalg.solve(B, C))
        worst = max(worst, abs(rt - rl) / max(1.0, rt))
    return worst <= 1e-10, f'max |rho(T) - rho(B^-1 C)| / max(1, rho) = {worst:.2e}', 30


def c3_identity():
    worst = 0.0
    for seed in range(50):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 13))
        A = random_npd(n, 3.0, seed=seed)
        M = A + _rand(rng, n)
        worst = max(worst, stein_identity_residual(A, M, M - A))
    return worst <= 1e-11, f'max relative residual {worst:.2e}', 10


def c4_relaxation():
    worst, exact = 0.0, True
    rng = np.random.default_rng(4)
    for _, ms in suite():
        T = iteration_matrix(ms)
        rho = spectral_radius(T)
        exact &= relaxed(T, 1.0) is T
        hi = omega_range(rho)[1]
        for omega in rng.uniform(0, hi, 10):
            if omega == 0:
                continue
            worst = max(worst, spectral_radius(relaxed(T, omega)))
    return worst < 1 and exact, f'max rho(T_omega) = {worst:.6f}; omega=1 identity: {exact}', None


def c5_pss_chain():
    rows = combos = 0
    fails = {'rho<=||M||': 0, '||M||<=||V||': 0, '||V||<1': 0, 'rho(Mcal)<1': 0}
    worst_gap = worst_mcal = 0.0
    for seed in range(20):
        n = (4, 8, 16)[seed % 3]
        A = random_npd(n, 2.0, seed=seed)
        if seed % 2:
            upper, lower = ts_split(A, 'strict-upper'), ts_split(A, 'strict-lower')
        else:
            blocks = (n // 2, n - n // 2)
            upper, lower = bts_split(A, blocks, 'strict-upper'), bts_split(A, blocks, 'strict-lower')
        for p in (upper, lower):
            for r in rho_vs_bound_sweep(p, ALPHAS):
                rows += 1
                fails['rho<=||M||'] += r.rho_M > r.norm_M + 1e-12
                fails['||M||<=||V||'] += r.norm_M > r.norm_V + 1e-12
                fails['||V||<1'] += not r.norm_V < 1 + 1e-12
                worst_gap = max(worst_gap, r.norm_M - r.norm_V)
        for a1 in ALPHAS:
            for a2 in ALPHAS:
                for beta in (0.25, 0.5, 0.75):
                    Mcal = pss_iteration_matrix([upper.with_alpha(a1), lower.with_alpha(a2)],
                                                [beta, 1 - beta])
                    rho = spectral_radius(Mcal)
                    combos += 1
                    fails['rho(Mcal)<1'] += not rho < 1
                    worst_mcal = max(worst_mcal, rho)
    ok = not any(fails.values())
    detail = (f'{rows} rows, {combos} combinations; violations ' +
              ', '.join(f'{k}: {v}' for k, v in fails.items()) +
              f'; max(||M||-||V||) = {worst_gap:.3f}; max rho(Mcal) = {worst_mcal:.4f}')
    return ok, detail, 60


def c6_optimal_alpha():
    msgs = []
    a = optimal_alpha(np.diag([1.0, 4.0]))
    ok = abs(a.alpha_star - 2) <= 1e-6 and abs(a.bound_at_star - 1 / 3) <= 1e-6
    herm_err = 0.0
    for seed in range(20):
        n = int(np.random.default_rng(seed).integers(2, 11))
        P = random_npd(n, 0.0, seed=seed)
        lam = np.linalg.eigvalsh(P)
        kappa = lam[-1] / lam[0]
        a = optimal_alpha(P)
        herm_err = max(herm_err, abs(a.alpha_star - np.sqrt(lam[0] * lam[-1])),
                       abs(a.bound_at_star - (np.sqrt(kappa) - 1) / (np.sqrt(kappa) + 1)))
    ok &= herm_err <= 1e-6
    grid_err = fp = 0.0
    for seed in range(10):
        P = random_npd(int(np.random.default_rng(seed).integers(2, 9)), 3.0, seed=500 + seed)
        a = optimal_alpha(P)
        grid = np.linspace(a.sigma_min, a.sigma_max, 1000)
        best = grid[int(np.argmin([v_alpha_norm(P, g) for g in grid]))]
        grid_err = max(grid_err, abs(a.alpha_star - best))
        fp = max(fp, a.fixed_point_residual / max(1.0, a.alpha_star))
    ok &= grid_err <= 1e-2 and fp <= 1e-6
    msgs.append(f'Hermitian max error {herm_err:.1e}; grid argmin gap {grid_err:.1e}; '
                f'fixed-point residual {fp:.1e}')
    return ok, '; '.join(msgs), None


def c7_end_to_end():
    ms = make_multisplitting([[2.0]], [([[3.0]], [[1.0]]), ([[4.0]], [[2.0]])], [0.5, 0.5])
    rep = multisplit_run(ms, [2.0], tol=1e-12)
    rate = rep.rho_estimate
    scalar_ok = rep.converged and abs(rate - 5 / 12) <= 0.02
    A = convection_diffusion(64, 10.0)
    ms, _ = hadjidimos_multisplitting(A, [1.0, 1.0])
    cert = certify_multisplitting(ms, 'contraction').verdict
    b = A @ np.ones(64)
    rep = multisplit_run(ms, b, SolveConfig(tol=1e-10, max_iter=200000, exact_rho=True))
    budget = 1.2 * np.log(1e-10) / np.log(rep.rho_exact)
    x = np.linalg.solve(A, b)
    err = np.linalg.norm(rep.final_x - x) / np.linalg.norm(x)
    ok = scalar_ok and cert and rep.converged and rep.iterates_used <= budget and err <= 1e-8
    return ok, (f'scalar contraction {rate:.5f}; CD n=64 certified={cert}, '
                f'{rep.iterates_used} iterations (budget {budget:.0f}), error {err:.1e}'), None


def c8_one_step():
    A = np.array([[2.0, 1.0], [-1.0, 2.0]])
    b = np.array([1.0, -3.0])
    rep = pss_run([ts_split(A, 'strict-upper', 2.0)], b)
    ok = rep.converged and rep.iterates_used == 1
    return ok, f'{rep.iterates_used} iteration(s), residual {rep.residual_history[-1]:.1e}', None


def c9_machinery():
    checks = []
    checks.append(np.allclose(bracket(np.diag([-2.0, 3.0])), np.diag([2.0, 3.0])))
    checks.append(np.allclose(bracket([[0.0, 1.0], [-1.0, 0.0]]), np.eye(2)))
    checks.append(np.allclose(bracket([[0.0, 1.0], [1.0, 0.0]]), np.eye(2)))
    mk = lambda a: BlockMatrix(np.array(a, float).reshape(2, 2, 1, 1))
    checks.append(np.allclose(block_comparison(mk([[2, -1], [-1, 2]])).to_dense(), [[2, -1], [-1, 2]]))
    blocks = np.zeros((2, 2, 2, 2))
    blocks[0, 0] = blocks[1, 1] = 3 * np.eye(2)
    blocks[0, 1] = blocks[1, 0] = [[0, 1], [1, 0]]
    checks.append(np.allclose(block_comparison(BlockMatrix(blocks))[0, 1], -np.eye(2)))
    r = generalized_m_matrix(mk([[2, -1], [-1, 2]]))
    checks.append(r.verdict and np.allclose(r.u, 1) and abs(r.witness - 1) < 1e-12)
    checks.append(not generalized_m_matrix(mk([[1, -2], [-2, 1]])).verdict)
    checks.append(extended_h_matrix(mk([[2, -1], [-1, 2]])).verdict)
    checks.append(not extended_h_matrix(mk([[1, -2], [-2, 1]])).verdict)
    examples = all(checks)

    lam_ratio = np.inf
    rng = np.random.default_rng(9)
    for _ in range(20):
        n = int(rng.integers(1, 7))
        Q = random_unitary(n, rng)
        B = (Q * (rng.standard_normal(n) + 1j * rng.standard_normal(n))) @ Q.conj().T
        K = bracket(B)
        for t in np.linspace(0, 2 * np.pi, 16, endpoint=False):
            X = np.block([[K, np.exp(1j * t) * B], [np.exp(-1j * t) * B.conj().T, K]])
            lmin = np.linalg.eigvalsh((X + X.conj().T) / 2)[0]
            lam_ratio = min(lam_ratio, lmin / np.linalg.norm(B, 2))
    psd = lam_ratio >= -1e-10

    true_count, implied = 0, True
    for seed in range(20):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 9))
        B = random_npd(n, 2.0, seed=seed)
        C = _rand(rng, n)
        C *= rng.uniform(0.05, 1.5) / np.linalg.norm(C, 2)
        if at_family_pd(B, C).verdict:
            true_count += 1
            implied &= spectral_radius(np.linalg.solve(B, C)) < 1 + 1e-8
    ok = examples and psd and implied
    return ok, (f'{sum(checks)}/{len(checks)} examples; block PSD min lambda/||B|| = '
                f'{lam_ratio:.1e}; A_t verdicts true on {true_count}/20, implication held: '
                f'{implied}'), None


def c10_determinism():
    configs = []
    A = random_npd(12, 2.0, seed=1)
    rng = np.random.default_rng(1)
    parts = []
    for _ in range(4):
        N = 0.5 * _rand(rng, 12)
        N = N @ N.conj().T / 12
        parts.append((A + N, N))
    configs.append(('multisplit scalar', lambda cfg: multisplit_run(
        make_multisplitting(A, parts, [0.25] * 4), np.ones(12), cfg)))
    W = rng.uniform(0.1, 1, (4, 12))
    configs.append(('multisplit diagonal E_k', lambda cfg: multisplit_run(
        make_multisplitting(A, parts, list(W / W.sum(axis=0))), np.ones(12), cfg)))
    Acd = convection_diffusion(16, 10.0)
    configs.append(('multisplit triangular shift', lambda cfg: multisplit_run(
        hadjidimos_multisplitting(Acd, [1.0, 2.0, 3.0, 4.0])[0], Acd @ np.ones(16), cfg)))
    configs.append(('pss two parts', lambda cfg: pss_run(
        [ts_split(A, 'strict-upper', 3.0), ts_split(A, 'strict-lower', 4.0)], np.ones(12), cfg)))
    configs.append(('pss three parts relaxed', lambda cfg: pss_run(
        [ts_split(A, 'strict-upper', 3.0), ts_split(A, 'strict-lower', 4.0),
         bts_split(A, (6, 6), 'strict-upper', 5.0)], np.ones(12), cfg, weights=[0.5, 0.3, 0.2])))
    bad = []
    for name, run in configs:
        reps = []
        for w in (1, 2, 8):
            cfg = SolveConfig(workers=w, record_iterates=True, max_iter=5000,
                              omega=0.9 if 'relaxed' in name else 1.0)
            reps.append(run(cfg))
        ref = reps[0]
        for r in reps[1:]:
            if r.iterates_used != ref.iterates_used or not all(
                    np.array_equal(x, y) for x, y in zip(r.iterates, ref.iterates)):
                bad.append(name)
    return not bad, f'{len(configs)} configurations x workers (1, 2, 8); mismatches: {bad or "none"}', None


CRITERIA = [
    (1, 'hypothesis-implication suite', c1_implications),
    (2, 'lifted identity', c2_lifted),
    (3, 'Stein-form identity residual', c3_identity),
    (4, 'relaxation range', c4_relaxation),
    (5, 'PSS norm chain', c5_pss_chain),
    (6, 'optimal alpha', c6_optimal_alpha),
    (7, 'solver end-to-end', c7_end_to_end),
    (8, 'one-step exactness', c8_one_step),
    (9, 'comparison-matrix machinery', c9_machinery),
    (10, 'determinism across worker counts', c10_determinism),
]


def evaluate(fn):
    t0 = time.perf_counter()
    out = fn()
    elapsed = time.perf_counter() - t0
    ok, detail = out[0], out[1]
    limit = out[2] if len(out) > 2 else None
    if limit is not None and elapsed >= limit:
        ok = False
        detail += f'; runtime {elapsed:.1f}s exceeds {limit}s'
    return bool(ok), f'{detail} [{elapsed:.1f}s]'


def line(num, name, ok, detail):
    return f'criterion {num:2d} {"PASS" if ok else "FAIL"}  {name}: {detail}'


@pytest.mark.parametrize('num, name, fn', CRITERIA, ids=[f'c{c[0]}' for c in CRITERIA])
def test_criterion(num, name, fn, capsys):
    ok, detail = evaluate(fn)
    with capsys.disabled():
        print('\n' + line(num, name, ok, detail))
    assert ok, detail


if __name__ == '__main__':
    results = []
    for num, name, fn in CRITERIA:
        ok, detail = evaluate(fn)
        results.append(ok)
        print(line(num, name, ok, detail), flush=True)
    sys.exit(0 if all(results) else 1)
