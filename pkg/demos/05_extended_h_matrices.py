"""Extended H-matrices: block diagonal dominance through comparison matrices.

For a block matrix with normal off-diagonal blocks, the comparison matrix
keeps the Hermitian part of each diagonal block and replaces each
off-diagonal block by minus its absolute value <A_ij> = Q |Lambda| Q*.
"""
# %%
import numpy as np

import multisplit as ms

print('<[[0, 1], [-1, 0]]> =\n', ms.bracket([[0.0, 1.0], [-1.0, 0.0]]).round(12))

# %% Scalar blocks: the classic M-matrix test.
good = ms.BlockMatrix(np.array([[2.0, -1.0], [-1.0, 2.0]]).reshape(2, 2, 1, 1))
bad = ms.BlockMatrix(np.array([[1.0, -2.0], [-2.0, 1.0]]).reshape(2, 2, 1, 1))
for name, B in (('good', good), ('bad', bad)):
    r = ms.extended_h_matrix(B)
    print(f'{name}: verdict={r.verdict} status={r.status} u={r.u} margin={r.witness:.3f}')

# %% Random blocks: dominance holds while the off-diagonal scale stays small.
for off in (0.1, 0.4, 0.9, 1.5):
    B = ms.block_structured(3, 4, off_scale=off, seed=2)
    r = ms.extended_h_matrix(B)
    print(f'off_scale={off:3.1f}: {r.status:14s} margin={r.witness:+.3f}')

# %% The A_t family: positive definite for all t certifies rho(B^-1 C) < 1.
B, C = np.diag([3.0, 4.0]), np.array([[0.5, 0.5], [1.0, 1.0]])
r = ms.at_family_pd(B, C)
print('A_t positive definite on the grid:', r.verdict, ' min eigenvalue', round(r.witness, 4))
print('rho(B^-1 C) =', ms.spectral_radius(np.linalg.solve(B, C)))
