"""Parallel PSS: positive definite / skew-Hermitian splittings in parallel.

A triangular split A = M + N gives P = M + N* and S = N - N*.  Each part does
two half-steps with shift alpha; the parts are averaged.
"""
# %%
import numpy as np

import multisplit as ms

A = np.array([[2.0, 1.0], [-1.0, 2.0]])
p = ms.ts_split(A, 'strict-upper', alpha=2.0)
print('P =\n', p.P, '\nS =\n', p.S)

# %% With alpha = 2 the factor (alpha I - P) vanishes, so M(2) = 0 and one
# step is exact.
M, G = ms.pss_matrices(p)
print('M(2) =\n', M)
rep = ms.pss_run([p], np.array([3.0, 1.0]))
print('iterations:', rep.iterates_used, ' x =', rep.final_x)

# %% A larger problem with two triangular parts and different shifts.
A = ms.convection_diffusion((8, 8), q=(15.0, -5.0))
b = A @ np.ones(A.shape[0])
parts = [ms.ts_split(A, 'strict-upper', 60.0), ms.ts_split(A, 'strict-lower', 80.0)]
rep = ms.pss_run(parts, b, weights=[0.5, 0.5], exact_rho=True, workers=2, max_iter=20000)
print(f'converged={rep.converged} after {rep.iterates_used} sweeps, '
      f'rho estimate {rep.rho_estimate:.4f} vs exact {rep.rho_exact:.4f}')

# %% Workers do not change the arithmetic: iterates are bitwise identical.
runs = [ms.pss_run(parts, b, ms.SolveConfig(workers=w, record_iterates=True, max_iter=50))
        for w in (1, 4)]
print('bitwise identical:', all(np.array_equal(x, y)
                                for x, y in zip(runs[0].iterates, runs[1].iterates)))
