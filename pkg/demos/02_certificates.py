"""Certificates: checking sufficient conditions before iterating.

Each certificate returns a verdict and the number it hinges on (a smallest
eigenvalue or a norm).  We build a convection-diffusion matrix, split it with
the triangular-shift construction and check every condition.
"""
# %%
import numpy as np

import multisplit as ms

A = ms.convection_diffusion(32, q=20.0)
print('A positive definite:', ms.is_positive_definite(A))

# %% The shift bounds for the construction come from three eigenvalues.
print('shift lower bounds:', ms.hadjidimos_bounds(A))
msplit, params = ms.hadjidimos_multisplitting(A, [1.0, 1.0])
print(params)

# %% Per-part conditions, combined over the parts.
for label in ('contraction', 'yuan', 'extended-p-regular', 'p-regular-hermitian-n', 'n-psd'):
    res = ms.certify_multisplitting(msplit, label)
    print(f'{label:24s} verdict={res.verdict!s:5s} witness={res.witness:.4g}  {res.note}')

# %% The certified contraction shows up as rho(T) < 1.
print('rho(T) =', ms.spectral_radius(ms.iteration_matrix(msplit)))

# %% Stein form: for an extended P-regular splitting, A - T*AT factors as
# (I - T*) X (I - T) with X the extended P-regular matrix.
M = A + np.eye(32) * 100.0
print('identity residual:', ms.stein_identity_residual(A, M, M - A))
print('Stein check on M^-1 N:', ms.stein_check(A, np.linalg.solve(M, M - A)).verdict)
