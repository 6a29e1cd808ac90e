"""Weak-coupling eigenvalue expansions for abstract point-contact models.

Two systems, each described by a matrix Weyl function, are joined through a
point contact of strength ``ω``. A simple eigenvalue ``λ0`` of one of them
moves as ``λ0 + a|ω|² + b|ω|⁴ + ...``; :mod:`pointcontact.perturbation`
computes the coefficients and :mod:`pointcontact.continuation` tracks the
branch numerically to check them.
"""
from .contact import CoupledSystem, CouplingSpec, block_det, char_fn, t_matrix
from .continuation import (BranchSample, BranchTrace, FitResult, fit_coefficients,
                           geometric_grid, track_branch)
from .errors import *  # noqa: F401,F403
from .matrix_core import adjugate, det, hermitian_sqrt, inverse, trace
from .perturbation import (ExpansionResult, coeff_a, coeff_ab_scalar,
                           evaluate_expansion, expansion)
from .weyl import (ExtensionSpectrumProbe, WeylModel, detfun, find_isolated_eigenvalue,
                   make_point_interaction, make_scalar_rational, make_tabulated)

__version__ = "0.1.0"
