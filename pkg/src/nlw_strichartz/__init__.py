"""Numerical laboratory for the L^4 Strichartz norm of small solutions of
the cubic wave equation in 3+1 dimensions, built on the conformal (Penrose)
compactification of radial solutions."""

from .errors import (AccuracyError, ConfigError, DivergenceError, DomainError,
                     InvariantError, LabError, NumericError)
from .functional import CONSTANTS, ConstantsTable, PhaseAngle, scal, scal_closed_form
from .penrose import Field, evolve_pair, l4_norm4, sample_minkowski, square_grid, theta_field
from .picard import SolverConfig, solve
from .projection import ManifoldParams, gamma_apply, project_radial
from .profiles import classify, mixed_l4_decay, parse_sequence
from .sobolev import DataPair, RadialProfile, pair_norm_sq, theta_pair, unit_theta_pair

__version__ = "0.1.0"
