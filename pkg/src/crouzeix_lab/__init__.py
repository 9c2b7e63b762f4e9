"""Numerical laboratory for the 2x2 Crouzeix bound and the conformal maps behind it."""

from .conformal import (
    EllipseMapSeries,
    ProfileDomain,
    QuinticMap,
    bicirc_from_profile,
    boundary_derivative_identity,
    ellipse_constants,
    phi_eval,
    phi_inverse,
    quintic_admissible,
    schwarz_jack_verify,
    square_transform,
    verify_symmetry,
)
from .crouzeix import (
    cauchy_transform_numeric,
    crouzeix_ratio,
    phi_psi_of_A,
    ratio_search,
    verify_cp_bound,
)
from .matrices import (
    canonicalize_2x2,
    ellipse_params_2x2,
    nr_boundary,
    op_norm,
    poly_apply,
    schur_2x2,
)
from .numerics import (
    CurveSamples,
    Polynomial,
    cheb_eval,
    max_modulus_on_curve,
    poly_derivative,
    poly_eval,
    profile_check,
)

__version__ = "0.1.0"
