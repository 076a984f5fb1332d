"""
Leading n^6 coefficients on X_4.

Weights are integer multiples of n, right-aligned on the tower: (6, 2, 1)
means O_4(0, 6n, 2n, n). chi is summed on X_2; the h^2 correction and the
curve sums run over the triple family (k, l, j) on X_1.
"""
from __future__ import annotations

import logging
from collections import Counter
from collections.abc import Sequence
from functools import lru_cache

from jetbig.cohomology import LeadingForm
from jetbig.config import get_settings
from jetbig.lattice import Constraint, Region, enumerate_region, leading_coefficients
from jetbig.lattice.leading import Method
from jetbig.pipelines.report import BigReport
from jetbig.pipelines.x3 import check_degree, check_mode, curve_factors, curve_parts
from jetbig.ratpoly import RationalPoly
from jetbig.rr import chi_top_term, surface_chi_top_term
from jetbig.tower import (
    GradedFamily,
    H2Context,
    PreconditionError,
    boundary_census,
    push_to_base_family,
    r1_direct_image,
    r1_region,
)

logger = logging.getLogger("jetbig.pipelines")

DEGREE_IN_N = 6
DEFAULT_WEIGHTS = (6, 2, 1)
RELAXED_MIN_DEGREE = 10


@lru_cache(maxsize=None)
def chi4_family(weights: tuple[int, ...] = DEFAULT_WEIGHTS) -> GradedFamily:
    n = RationalPoly.var("n")
    return push_to_base_family(4, [n.scale(w) for w in weights])


@lru_cache(maxsize=None)
def h2_family_4() -> GradedFamily:
    """O_4(6n, 2n, n) pushed all the way to X_1, indexed by (k, l, j)."""
    n = RationalPoly.var("n")
    return push_to_base_family(4, [n.scale(w) for w in DEFAULT_WEIGHTS], target_level=1)


def r1_piece_4() -> tuple[Region, RationalPoly, RationalPoly, RationalPoly]:
    """
    The s <= -2 region of the triple family with (alpha, beta, t).

    The h^2 of a piece is h^1 of S^alpha T_X^* (x) tK_X (Serre dual form,
    t = 2 - j - q), and its h^0 part is that of S^alpha T_X^* (x) beta K_X.
    """
    family = h2_family_4()
    r1 = r1_direct_image(family.member.weights[0], family.member.kx_exponent)
    alpha, t = r1.serre_dual_form()
    _, beta = r1.cotangent_form()
    return r1_region(family), alpha, beta, t


def curve_regions_4(mode: str, d: int | None = None) -> tuple[Region, Region]:
    check_mode(mode)
    region, alpha, beta, _ = r1_piece_4()
    region = region.with_constraints(Constraint.gt(alpha))
    if mode == "exact_region":
        if d is None:
            raise PreconditionError("exact_region needs a numeric degree; its region depends on d")
        exact = region.with_constraints(Constraint.gt((d - 4) * beta, alpha))
        return exact, exact
    return (region.with_constraints(Constraint.gt(beta)),
            region.with_constraints(Constraint.gt((RELAXED_MIN_DEGREE - 4) * beta, alpha)))


# ---------------------------------------------------------------------------
# Pipelines
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _chi4_at(weights: tuple[int, ...], method: Method) -> tuple[LeadingForm, str]:
    family = chi4_family(weights)
    form = chi_top_term(family.member).summand
    result = leading_coefficients(family.region, [form.a, form.b], DEGREE_IN_N, method=method)
    logger.info(f"chi4 {weights}: {result.note()}")
    return LeadingForm(a=result.values[0], b=result.values[1]), f"chi4 {weights}: {result.note()}"


def chi4_leading(weights: Sequence[int] = DEFAULT_WEIGHTS, method: Method = "auto",
                 notes: list[str] | None = None) -> LeadingForm:
    """n^6 coefficient of chi(O_4(weights * n))."""
    weights = tuple(int(w) for w in weights)
    if len(weights) > 4:
        raise ValueError(f"X_4 takes at most 4 weights, got {len(weights)}")
    form, note = _chi4_at(weights, method)
    if notes is not None:
        notes.append(note)
    return form


@lru_cache(maxsize=None)
def _h2chi4(method: Method) -> tuple[LeadingForm, str]:
    region, alpha, _, t = r1_piece_4()
    form = surface_chi_top_term(alpha, t)
    result = leading_coefficients(region, [form.a, form.b], DEGREE_IN_N, method=method)
    logger.info(f"h2chi4: {result.note()}")
    return LeadingForm(a=result.values[0], b=result.values[1]), f"h2chi4: {result.note()}"


def h2chi_correction_4(method: Method = "auto", notes: list[str] | None = None) -> LeadingForm:
    """n^6 coefficient of the sum of chi(S^alpha T_X^* (x) (2-j-q)K_X) over the triple region."""
    form, note = _h2chi4(method)
    if notes is not None:
        notes.append(note)
    return form


@lru_cache(maxsize=None)
def _curve_sums_4(mode: str, d: int | None,
                  method: Method) -> tuple[RationalPoly, RationalPoly, str]:
    region_a, region_b = curve_regions_4(mode, d)
    _, alpha, beta, _ = r1_piece_4()
    part_a, part_b = curve_parts(alpha, beta)
    if region_a == region_b:
        result = leading_coefficients(region_a, [part_a, part_b], DEGREE_IN_N, method=method)
        sum_a, sum_b = result.values
        note = result.note()
    else:
        first = leading_coefficients(region_a, [part_a], DEGREE_IN_N, method=method)
        second = leading_coefficients(region_b, [part_b], DEGREE_IN_N, method=method)
        sum_a, sum_b = first.values[0], second.values[0]
        note = f"{first.note()} / {second.note()}"
    where = mode + (f" d={d}" if d is not None else "")
    logger.info(f"curve4 {where}: {note}")
    return sum_a, sum_b, f"curve4 {where}: {note}"


def curve_correction_4(d: int | str = "d", mode: str = "relaxed_region", method: Method = "auto",
                       notes: list[str] | None = None) -> RationalPoly:
    """n^6 coefficient of the curve sum of curve_chi_leading(alpha, beta, d) over I."""
    check_mode(mode)
    check_degree(d)
    if mode == "exact_region" and isinstance(d, str):
        raise PreconditionError("exact_region needs a numeric degree; its region depends on d")
    sum_a, sum_b, note = _curve_sums_4(mode, d if mode == "exact_region" else None, method)
    if notes is not None:
        notes.append(note)
    factor_a, factor_b = curve_factors(d)
    return (sum_a * factor_a - sum_b * factor_b).drop_unused()


def h0_bound_4(d: int | str = "d", mode: str = "relaxed_region", method: Method = "auto",
               notes: list[str] | None = None) -> RationalPoly:
    """specialize(chi4 + h2chi4, d) - curve4 for O_4(6n, 2n, n)."""
    check_mode(mode)
    check_degree(d)
    chi = chi4_leading(DEFAULT_WEIGHTS, method, notes)
    h2 = h2chi_correction_4(method, notes)
    curve = curve_correction_4(d, mode, method, notes)
    return ((chi + h2).specialize_degree(d) - curve).drop_unused()


def dropped_census_4(d: int | None = None, n: int | None = None) -> dict[str, int]:
    """Pieces at a fixed n left out of the leading sums of the triple family."""
    n = n or get_settings().census_n
    region, alpha, beta, t = r1_piece_4()
    counts: Counter[str] = Counter({"alpha_zero": 0, "flenner_gap": 0, "low_twist": 0})
    for point in enumerate_region(region, {"n": n}):
        at = {"n": n, **dict(zip(region.variables, point))}
        a_val, b_val = alpha.evaluate(at), beta.evaluate(at)
        if a_val == 0:
            counts["alpha_zero"] += 1
        elif d is not None and 0 < (d - 4) * b_val - a_val <= 2 * d:
            counts["flenner_gap"] += 1
        if t.evaluate(at) >= 0:
            counts["low_twist"] += 1
    census = boundary_census(h2_family_4(), n, H2Context(degree=d))
    counts["boundary"] = census["BOUNDARY"]
    logger.debug(f"dropped_census_4 d={d} n={n}: {dict(counts)}")
    return dict(counts)


def build_report_4(d: int | str = "d", mode: str = "relaxed_region", method: Method = "auto",
                   threshold: int | None = None) -> BigReport:
    notes: list[str] = []
    chi = chi4_leading(DEFAULT_WEIGHTS, method, notes)
    h2 = h2chi_correction_4(method, notes)
    curve = curve_correction_4(d, mode, method, notes)
    h0 = ((chi + h2).specialize_degree(d) - curve).drop_unused()
    census = dropped_census_4(None if isinstance(d, str) else d)
    notes.append(f"dropped at n={get_settings().census_n}: "
                 + ", ".join(f"{k}={v}" for k, v in sorted(census.items())))
    if mode == "relaxed_region":
        notes.append(f"relaxed curve regions are a valid bound for d >= {RELAXED_MIN_DEGREE}")
    return BigReport(
        tower_level=4,
        weights="O_4(6n, 2n, n)",
        degree=d,
        mode=mode,
        chi_leading=chi,
        h2_chi_correction=h2,
        curve_correction=curve,
        h0_leading=h0,
        threshold=threshold,
        notes=tuple(notes),
    )
