"""Numerical toolkit for W_V(b) = 2 cosh(bP) - V with complex potentials."""

from .birman_schwinger import EigenReport, SearchSpec, assemble, bs_norm, find_eigenvalues, fredholm_det, verify_bound
from .delta import DeltaModel, delta_condition, eigenfunction, rank_one_fourier_check, solve_all, trace_branches
from .potentials import GaussianTerm, Potential, factorize, l1_norm, load_potential
from .quadrature import QuadratureSpec
from .resolvent import diagonal, kernel, kernel_ft_form
from .spectral import ModelParams, OmegaPoint, SpectralParam, lambda_of_omega, omega_of_lambda, symbol
from .variational import certify_bound_state, form_value, kinetic_term

__version__ = "0.1.0"
