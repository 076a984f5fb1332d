"""Lattice regions, exact sums over them, and recovery of their closed forms in n."""
from jetbig.lattice.fitting import QuasiPoly, dump_samples_csv, fit_closed_form, fit_closed_forms
from jetbig.lattice.leading import LeadingResult, leading_coefficient, leading_coefficients
from jetbig.lattice.region import (
    Constraint,
    NonAffineConstraintError,
    NonFiniteRegionError,
    Region,
    count_points,
    dilation_vertices,
    enumerate_region,
    geometric_period,
)
from jetbig.lattice.summation import exact_sum, exact_sums
from jetbig.lattice.volume import integrate_polytope, leading_by_volume

__all__ = [
    "Constraint",
    "LeadingResult",
    "NonAffineConstraintError",
    "NonFiniteRegionError",
    "QuasiPoly",
    "Region",
    "count_points",
    "dilation_vertices",
    "dump_samples_csv",
    "enumerate_region",
    "exact_sum",
    "exact_sums",
    "fit_closed_form",
    "fit_closed_forms",
    "geometric_period",
    "integrate_polytope",
    "leading_by_volume",
    "leading_coefficient",
    "leading_coefficients",
]
