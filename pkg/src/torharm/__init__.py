"""Solid toroidal harmonics, expansions between them and spherical harmonics,
and a charged-conducting-torus field solver."""

from .coords import CartesianPoint, ToroidalPoint, from_toroidal, to_cartesian, to_toroidal
from .special import (
    EvalResult,
    HarmonicSpec,
    assoc_legendre,
    gamma_half,
    harmonic_eval,
    legendre_P_half,
    legendre_Q_half,
    legendre_zero,
    oracle_ring_integral,
)
from .coeffs import CoeffTable, build_table, coeff_c, coeff_neg_m, coeff_s, erofeenko_residual
from .expansions import (
    convergence_region,
    ring_via_spherical,
    spherical_via_toroidal,
    truncation_estimate,
)
from .greens import PointPair, green_cylindrical, green_direct, green_spherical, green_toroidal
from .torus import FieldGrid, GridSpec, TorusGeometry, error_map, potential_spherical, \
    potential_toroidal, torus_params

__version__ = "0.1.0"

__all__ = [
    "CartesianPoint", "ToroidalPoint", "to_toroidal", "to_cartesian", "from_toroidal",
    "EvalResult", "HarmonicSpec", "harmonic_eval", "legendre_P_half", "legendre_Q_half",
    "assoc_legendre", "legendre_zero", "gamma_half", "oracle_ring_integral",
    "CoeffTable", "build_table", "coeff_c", "coeff_s", "coeff_neg_m", "erofeenko_residual",
    "ring_via_spherical", "spherical_via_toroidal", "truncation_estimate", "convergence_region",
    "PointPair", "green_direct", "green_spherical", "green_toroidal", "green_cylindrical",
    "TorusGeometry", "torus_params", "GridSpec", "FieldGrid",
    "potential_toroidal", "potential_spherical", "error_map",
    "__version__",
]
