"""Green functions, harmonic polynomials and contour asymptotics for a family
of zero-drift random walks killed at the boundary of the quarter plane.

The family is indexed by an integer n >= 3 (jump probabilities
sin(pi/n)^2/2 horizontally, cos(pi/n)^2/2 diagonally) and carries a dihedral
symmetry group of order 2n on its kernel curve.  The package computes exact
Green functions by lattice truncation, the degree-n positive harmonic
polynomial of the walk, a closed contour-integral representation of the Green
functions, and the matching asymptotic formulas, with each analytic route
cross-validated against the brute-force oracle.
"""

from .asymptotics import (AsymptoticReport, absorption_asymptotic,
                          angular_factor, brownian_green_asymptotic,
                          convergence_report, green_asymptotic, snap_to_ray)
from .contour import (ContourSpec, QuadratureError, SaddleData, green_contour,
                      laplace_leading_term, saddle_scale)
from .green import (ConsistencyError, IdentityCheck, LatticeField,
                    SolverConvergenceError, TruncationPolicy,
                    absorption_profile, continuation_identity_check,
                    generating_function_check, solve_green, solve_green_box,
                    solve_green_stepwise)
from .group import (GroupClassification, GroupClosureError, GroupElement,
                    MobiusMap, PoleCollisionError, cone_Dk, enumerate_group,
                    finiteness_criterion, generators, signed_orbit_sum)
from .harmonic import (HarmonicPolynomial, check_harmonicity, closed_form,
                       cone_map, dominant_term, doob_row_sum, reduite,
                       reduite_cartesian, reduite_link_constant, reduite_ratio,
                       value_11, value_22)
from .riemann import INFINITY, is_infinity
from .series import (ComplexSeries, chi_series, kappa, kappa_table,
                     nu_coefficients, series_x, series_y)
from .uniformization import Cone, Uniformization, cycle_images
from .walk_model import (State, WalkModel, discriminant, discriminant_roots,
                         kernel, make_model, quadratic_coeffs)

__version__ = "0.1.0"

__all__ = [
    "AsymptoticReport", "ComplexSeries", "Cone", "ConsistencyError",
    "ContourSpec", "GroupClassification", "GroupClosureError", "GroupElement",
    "HarmonicPolynomial", "IdentityCheck", "INFINITY", "LatticeField",
    "MobiusMap", "PoleCollisionError", "QuadratureError", "SaddleData",
    "SolverConvergenceError", "State", "TruncationPolicy", "Uniformization",
    "WalkModel", "absorption_asymptotic", "absorption_profile",
    "angular_factor", "brownian_green_asymptotic", "check_harmonicity",
    "chi_series", "closed_form", "cone_Dk", "cone_map",
    "continuation_identity_check", "convergence_report", "discriminant",
    "discriminant_roots", "dominant_term", "doob_row_sum", "enumerate_group",
    "finiteness_criterion", "generating_function_check", "generators",
    "green_asymptotic", "green_contour", "is_infinity", "kappa", "kappa_table",
    "kernel", "laplace_leading_term", "make_model", "nu_coefficients",
    "quadratic_coeffs", "reduite", "reduite_cartesian",
    "reduite_link_constant", "reduite_ratio", "saddle_scale", "series_x",
    "series_y", "signed_orbit_sum", "snap_to_ray", "solve_green",
    "solve_green_box", "solve_green_stepwise", "value_11", "value_22",
    "cycle_images",
]
