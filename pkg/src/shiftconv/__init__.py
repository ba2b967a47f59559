"""Numerical toolkit for GL(3) x GL(2) shifted convolution sums."""

from .arith import divisors, factorize, mobius, mod_inverse
from .coeffs import build_gl2_table, build_sym2_table, gl2_coeff
from .delta import DeltaConfig, delta_decompose, hyperbola_split, s1_simplified, s_split_exact, twist
from .expsums import c_sum_brute, c_sum_closed, curly_t_brute, curly_t_reduced, kloosterman, ramanujan_sum
from .lab import (
    ExperimentConfig,
    ShiftSpec,
    build_factorable_shifts,
    fit_exponent,
    munshi_decomposition_experiment,
    shifted_sum_direct,
    sweep_experiment,
    theorem_rhs_12,
    theorem_rhs_13,
)
from .voronoi import voronoi_lhs, voronoi_rhs

__version__ = "0.1.0"
