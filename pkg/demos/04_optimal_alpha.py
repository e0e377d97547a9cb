"""Choosing the PSS shift.

The norm of V(alpha) = (alpha I - P)(alpha I + P)^-1 bounds the radius of a
PSS step.  Its minimizer lies between the extreme singular values of P.
"""
# %%
import numpy as np

import multisplit as ms
from multisplit.pss_params import rho_vs_bound_sweep

# %% Hermitian P: the minimizer is sqrt(lambda_min * lambda_max).
a = ms.optimal_alpha(np.diag([1.0, 4.0]))
print(f'alpha* = {a.alpha_star:.8f}, bound = {a.bound_at_star:.8f}')

# %% Non-Hermitian P: golden-section search, then a fixed-point check.
P = np.array([[2.0, 1.0], [0.0, 2.0]])
a = ms.optimal_alpha(P)
print(f'sigma range [{a.sigma_min:.4f}, {a.sigma_max:.4f}], alpha* = {a.alpha_star:.6f}')
print(f'fixed-point residual {a.fixed_point_residual:.2e}, grid fallback {a.grid_fallback}')

# %% Sweep the actual iteration matrix against the bound.
A = ms.random_npd(8, skew_scale=2.0, seed=1)
p = ms.ts_split(A, 'strict-upper')
star = ms.optimal_alpha(p.P).alpha_star
print(' alpha    rho(M)  ||M||   ||V||')
for r in rho_vs_bound_sweep(p, sorted([0.1, 0.5, 1.0, 2.0, 5.0, 10.0, star])):
    mark = ' *' if r.is_alpha_star else ''
    print(f'{r.alpha:6.3f}  {r.rho_M:.4f}  {r.norm_M:.4f}  {r.norm_V:.4f}{mark}')

# rho(M) <= ||V|| < 1 on every row, but ||M|| itself can exceed ||V|| (even
# exceed 1) for small alpha: the spectral norm of M is not controlled by the
# bound, only its spectral radius is.
