"""Multisplitting basics: one scalar equation, two splittings, one answer.

We solve 2 x = 2 with the splittings 2 = 3 - 1 and 2 = 4 - 2, each weighted
by one half.  Every sweep solves both local problems independently and
averages the results.
"""
# %%
import numpy as np

import multisplit as ms

A = np.array([[2.0]])
msplit = ms.make_multisplitting(A, [([[3.0]], [[1.0]]), ([[4.0]], [[2.0]])], [0.5, 0.5])

# %% The iteration matrix is T = 0.5 * 1/3 + 0.5 * 2/4 = 5/12.
T = ms.iteration_matrix(msplit)
print('T =', T[0, 0], ' (5/12 =', 5 / 12, ')')

# %% The lifted pair (B, C) has the same spectral radius.
B, C = ms.lifted_matrices(msplit)
print('B =\n', B, '\nC =\n', C)
print('rho(B^-1 C) =', ms.spectral_radius(np.linalg.solve(B, C)))

# %% Run it.  Every step shrinks the residual by exactly 5/12.
report = ms.multisplit_run(msplit, [2.0], tol=1e-12)
print(f'converged to x = {report.final_x[0]:.15f} in {report.iterates_used} sweeps')
print('first residual ratios:', np.round(report.ratios[:5], 6))

# %% Relaxation: omega in (0, 2/(1+rho)) keeps the iteration convergent.
lo, hi = ms.omega_range(5 / 12)
print(f'safe omega range: ({lo}, {hi:.4f})')
for omega in (0.5, 1.0, 1.3, 1.9, 3.0):
    lam = omega * 5 / 12 + 1 - omega
    print(f'omega={omega:4.2f}  |omega*T + 1 - omega| = {abs(lam):.4f}')

# The interval is sufficient, not necessary: omega = 1.9 lies outside it and
# still converges, because the only eigenvalue is real and positive.  Real
# divergence starts once |omega * 5/12 + 1 - omega| > 1, i.e. omega > 24/7.
try:
    ms.multisplit_run(msplit, [2.0], omega=4.0)
except ms.DivergenceError as err:
    print('omega = 4:', err)
