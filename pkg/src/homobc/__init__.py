"""Numerical laboratory for homogenized Dirichlet data of oscillating
boundary-value problems for fully nonlinear uniformly elliptic operators."""

from .discrepancy import (Direction, UnitSequence, classify_rationality,
                          discrepancy, discrepancy_star, frac, omega,
                          rotation_discrepancy, slopes)
from .functions import PeriodicFn, cell_average, const, cos_k, parse_fn, sin_k
from .lattice import Hyperplane, LatticeApproach, approach_point, nearest_lattice_point
from .operators import (EllipticOperator, check_ellipticity,
                        directional_min_operator, eig2, evaluate,
                        isaacs_operator, linear_operator, pucci_minus,
                        pucci_operator, pucci_plus, rescale, sym2)
from .solver import (ClippedGrid, DiscreteField, RectangleGrid, SchemeConfig,
                     SolverError, discrete_comparison_check, discretize,
                     localization_barrier, solve_dirichlet)

__version__ = "0.1.0"
