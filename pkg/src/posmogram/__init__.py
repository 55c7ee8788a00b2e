"""Posmom (xp) distribution densities of quantum states on the two-sphere.

The central object is the posmogram: the distribution density of the
symmetrized position-momentum product Q_z = (x p_z + p_z x)/2 for a state
on the unit sphere, most importantly for the spherical harmonics Y_lm.
All quantities are dimensionless (hbar = 1, unit radius).
"""

from .closed_forms import (CLOSED_FORM_MODES, CrossValidationReport,
                           closed_form_amplitude, crossvalidate)
from .core import (amplitude, amplitude_grid, count_nodes, expand_state,
                   expand_state_grid, normalization, posmogram,
                   reconstruct_state, spherical_harmonic, superposition,
                   weight_function)
from .errors import (ConvergenceError, DomainError, PoleError,
                     PosmogramError, QuadratureError)
from .modes import (DEFAULT_CONFIG, DEFAULT_GRID, LambdaGrid, ModeIndex,
                    Parity, Posmogram, QuadratureConfig)
from .sho import ComparisonReport, compare, count_antinodes, fit_scale
from .specfun import (assoc_legendre, complex_gamma, hyp2f1_at_neg1,
                      incomplete_beta_rank_neg1, norm_const,
                      sho_momentum_density)
from .sphere_ops import (AngularPoint, EigenfunctionSpec,
                         geometric_momentum_apply, lz_apply, posmom_apply,
                         psi_eigenfunction, qxyz_simultaneous_eigenfunction,
                         qz_apply)

__version__ = "0.1.0"

__all__ = [
    "AngularPoint", "CLOSED_FORM_MODES", "ComparisonReport",
    "ConvergenceError", "CrossValidationReport", "DEFAULT_CONFIG",
    "DEFAULT_GRID", "DomainError", "EigenfunctionSpec", "LambdaGrid",
    "ModeIndex", "Parity", "PoleError", "Posmogram", "PosmogramError",
    "QuadratureConfig", "QuadratureError", "amplitude", "amplitude_grid",
    "assoc_legendre", "closed_form_amplitude", "compare", "complex_gamma",
    "count_antinodes", "count_nodes", "crossvalidate", "expand_state",
    "expand_state_grid", "fit_scale", "geometric_momentum_apply",
    "hyp2f1_at_neg1", "incomplete_beta_rank_neg1", "lz_apply",
    "norm_const", "normalization", "posmogram", "posmom_apply",
    "psi_eigenfunction", "qxyz_simultaneous_eigenfunction", "qz_apply",
    "reconstruct_state", "sho_momentum_density", "spherical_harmonic",
    "superposition", "weight_function",
]
