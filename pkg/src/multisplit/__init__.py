"""Parallel multisplitting and parallel PSS iterations for non-Hermitian
positive definite linear systems, with certificates for their convergence
conditions."""
from .errors import *  # noqa: F401,F403
from .linalg import (hermitian_part, skew_part, is_positive_definite,
                     spectral_radius, spectral_norm, simultaneous_diagonalize,
                     solve_dense, CongruencePair)
from .splittings import (Splitting, Multisplitting, PssSplitting,
                         HadjidimosParams, make_multisplitting,
                         hadjidimos_multisplitting, hadjidimos_bounds,
                         ps_split, ts_split,
                         bts_split)
from .certificates import (CertificateResult, BlockMatrix, p_regular,
                           p_regular_hermitian_n, extended_p_regular,
                           yuan_condition, contraction_condition,
                           certify_multisplitting, bracket, block_comparison,
                           generalized_m_matrix, extended_h_matrix,
                           at_family_pd, stein_identity_residual, stein_check)
from .iteration import (SolveConfig, IterationReport, iteration_matrix,
                        lifted_matrices, relaxed, multisplit_run, pss_matrices,
                        pss_run, pss_iteration_matrix, omega_range)
from .pss_params import (v_alpha_norm, f_alpha, optimal_alpha, AlphaAnalysis,
                         rho_vs_bound_sweep)
from .problems import (ProblemSpec, convection_diffusion, random_npd,
                       block_structured)
from .parallel import run_parallel, WorkerPool

__version__ = '0.1.0'
