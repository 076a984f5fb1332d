"""
Leading n^5 coefficients on X_3 for O_3(bn, n), parametrized by c = b + 1.

A symbolic c is passed as the string "c" and recovered by fitting quartics
over the integer grid c = 5, 6, ...; the h^2 region changes shape at c = 4,
so the fitted forms hold for c > 4. A symbolic degree is the string "d".

Usage:
    chi3_leading(3).to_text()                     # 249/60*c2 - 1*c1sq
    h0_bound_3("d", 3, "relaxed_region")           # cubic in d
    h0_bound_3(11, "c", "exact_region")           # quartic in c
"""
from __future__ import annotations

import logging
from collections import Counter
from fractions import Fraction
from functools import lru_cache
from typing import Literal

from jetbig.cohomology import LeadingForm
from jetbig.config import get_settings
from jetbig.lattice import Constraint, Region, enumerate_region, leading_coefficients
from jetbig.lattice.leading import Method
from jetbig.pipelines.grid import fit_form_over, fit_poly_over
from jetbig.pipelines.report import BigReport
from jetbig.ratpoly import RationalPoly, as_fraction, format_rational
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

Mode = Literal["exact_region", "relaxed_region"]
MODES: tuple[str, ...] = ("exact_region", "relaxed_region")
# older spelling accepted on the command line
MODE_ALIASES: dict[str, str] = {"paper_relaxed": "relaxed_region"}
LBound = Literal["cn", "3n"]

DEGREE_IN_N = 5
C_DEGREE = 4
C_GRID_START = 5

Param = int | Fraction | str


def _symbolic(value: object) -> bool:
    return isinstance(value, str)


def _note(notes: list[str] | None, text: str) -> None:
    if notes is not None:
        notes.append(text)


def check_c(c: int | Fraction) -> Fraction:
    value = as_fraction(c)
    if value < 3:
        raise PreconditionError(f"c = b + 1 must be >= 3, got {format_rational(value)}")
    return value


def check_degree(d: int | str) -> None:
    if not _symbolic(d) and d < 5:
        raise PreconditionError(f"surface degree must be >= 5, got {d}")


def check_mode(mode: str) -> None:
    if mode not in MODES:
        raise ValueError(f"unknown region mode {mode!r}; expected one of {MODES}")


def normalize_mode(mode: str) -> str:
    mode = MODE_ALIASES.get(mode, mode)
    check_mode(mode)
    return mode


def _method_for(c: Fraction, method: Method) -> Method:
    # non-integer c gives non-integer weights, so only the volume is meaningful
    if c.denominator != 1 and method != "volume":
        return "volume"
    return method


# ---------------------------------------------------------------------------
# Families and regions
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def chi3_family(c: Fraction) -> GradedFamily:
    """O_3(bn, n) pushed to X_1: O_1(cn - 4k - 3l) (x) K^(k+l) over 0<=k<=n, 0<=l<=cn-3k."""
    n = RationalPoly.var("n")
    return push_to_base_family(3, [n.scale(c - 1), n])


def r1_piece_3(c: Fraction) -> tuple[Region, RationalPoly, RationalPoly]:
    """The s <= -2 part of the family with (p, q) of S^p T_X^* (x) qK_X."""
    family = chi3_family(c)
    r1 = r1_direct_image(family.member.weights[0], family.member.kx_exponent)
    p, q = r1.cotangent_form()
    return r1_region(family), p, q


def curve_parts(p: RationalPoly, q: RationalPoly) -> tuple[RationalPoly, RationalPoly]:
    """curve_chi_leading(p, q, d) = A * d(d-4)^2 - B * d(d-3); returns (A, B)."""
    half = Fraction(1, 2)
    return (p * q * (p + q)).scale(half), (p ** 3).scale(half)


def curve_factors(d: int | str) -> tuple[RationalPoly, RationalPoly]:
    dp = RationalPoly.var(d) if isinstance(d, str) else RationalPoly.const(d)
    return dp * (dp - 4) ** 2, dp * (dp - 3)


def curve_regions_3(c: Fraction, mode: str, d: int | None = None,
                    l_bound: LBound = "cn") -> tuple[Region, Region]:
    """Regions for the A and B curve sums (they coincide in exact_region mode)."""
    check_mode(mode)
    region, p, q = r1_piece_3(c)
    k, l, n = RationalPoly.symbols("k l n")
    if l_bound == "3n":
        region = region.with_constraints(Constraint.ge(3 * n - 3 * k - l))
    if mode == "exact_region":
        if d is None:
            raise PreconditionError("exact_region needs a numeric degree; its region depends on d")
        exact = region.with_constraints(Constraint.ge(p), Constraint.gt((d - 4) * q - p, 2 * d))
        return exact, exact
    return (region.with_constraints(Constraint.gt(q)),
            region.with_constraints(Constraint.ge(q, p)))


# ---------------------------------------------------------------------------
# chi and the h^2 correction
# ---------------------------------------------------------------------------

def _form(values: tuple[RationalPoly, ...]) -> LeadingForm:
    return LeadingForm(a=values[0], b=values[1])


@lru_cache(maxsize=None)
def _chi3_at(c: Fraction, method: Method) -> tuple[LeadingForm, str]:
    family = chi3_family(c)
    form = chi_top_term(family.member).summand
    result = leading_coefficients(family.region, [form.a, form.b], DEGREE_IN_N,
                                  method=_method_for(c, method))
    logger.info(f"chi3 c={format_rational(c)}: {result.note()}")
    return _form(result.values), f"chi3 c={format_rational(c)}: {result.note()}"


@lru_cache(maxsize=None)
def _h2chi3_at(c: Fraction, method: Method) -> tuple[LeadingForm, str]:
    region, p, q = r1_piece_3(c)
    form = surface_chi_top_term(p, q)
    result = leading_coefficients(region, [form.a, form.b], DEGREE_IN_N,
                                  method=_method_for(c, method))
    logger.info(f"h2chi3 c={format_rational(c)}: {result.note()}")
    return _form(result.values), f"h2chi3 c={format_rational(c)}: {result.note()}"


def chi3_leading(c: Param = 3, method: Method = "auto",
                 notes: list[str] | None = None) -> LeadingForm:
    """n^5 coefficient of chi(O_3(bn, n))."""
    if _symbolic(c):
        _note(notes, f"chi3: quartic in {c} fitted over integer {c} >= {C_GRID_START}")
        return fit_form_over(lambda x: chi3_leading(x, method), c, C_GRID_START, C_DEGREE)
    form, note = _chi3_at(check_c(c), method)
    _note(notes, note)
    return form


def h2chi_correction_3(c: Param = 3, method: Method = "auto",
                       notes: list[str] | None = None) -> LeadingForm:
    """n^5 coefficient of the sum of chi(S^p T_X^* (x) qK_X) over the s <= -2 pieces."""
    if _symbolic(c):
        _note(notes, f"h2chi3: quartic in {c} fitted over integer {c} >= {C_GRID_START}")
        return fit_form_over(lambda x: h2chi_correction_3(x, method), c, C_GRID_START, C_DEGREE)
    form, note = _h2chi3_at(check_c(c), method)
    _note(notes, note)
    return form


# ---------------------------------------------------------------------------
# Curve correction and the h^0 bound
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _curve_sums_3(c: Fraction, mode: str, d: int | None, l_bound: LBound,
                  method: Method) -> tuple[RationalPoly, RationalPoly, str]:
    region_a, region_b = curve_regions_3(c, mode, d, l_bound)
    _, p, q = r1_piece_3(c)
    part_a, part_b = curve_parts(p, q)
    method = _method_for(c, method)
    if region_a == region_b:
        result = leading_coefficients(region_a, [part_a, part_b], DEGREE_IN_N, method=method)
        sum_a, sum_b = result.values
        note = result.note()
    else:
        first = leading_coefficients(region_a, [part_a], DEGREE_IN_N, method=method)
        second = leading_coefficients(region_b, [part_b], DEGREE_IN_N, method=method)
        sum_a, sum_b = first.values[0], second.values[0]
        note = f"{first.note()} / {second.note()}"
    where = f"c={format_rational(c)} {mode}" + (f" d={d}" if d is not None else "")
    logger.info(f"curve3 {where} l<={l_bound}: {note}")
    return sum_a, sum_b, f"curve3 {where}: {note}"


def curve_correction_3(d: int | str = "d", c: Param = 3, mode: str = "relaxed_region",
                       l_bound: LBound | None = None, method: Method = "auto",
                       notes: list[str] | None = None) -> RationalPoly:
    """n^5 coefficient of the sum of curve_chi_leading(p, q, d) over S (or its relaxations)."""
    check_mode(mode)
    check_degree(d)
    l_bound = l_bound or get_settings().s_prime_l_bound
    if mode == "exact_region" and _symbolic(d):
        raise PreconditionError("exact_region needs a numeric degree; its region depends on d")
    if _symbolic(c):
        _note(notes, f"curve3: quartic in {c} fitted over integer {c} >= {C_GRID_START}, "
                     f"l <= {l_bound}")
        return fit_poly_over(lambda x: curve_correction_3(d, x, mode, l_bound, method),
                             c, C_GRID_START, C_DEGREE)
    region_d = d if mode == "exact_region" else None
    sum_a, sum_b, note = _curve_sums_3(check_c(c), mode, region_d, l_bound, method)
    _note(notes, note)
    factor_a, factor_b = curve_factors(d)
    return (sum_a * factor_a - sum_b * factor_b).drop_unused()


def h0_bound_3(d: int | str = "d", c: Param = 3, mode: str = "relaxed_region",
               l_bound: LBound | None = None, method: Method = "auto",
               notes: list[str] | None = None) -> RationalPoly:
    """specialize(chi3 + h2chi3, d) - curve3, the n^5 coefficient of the h^0 lower bound."""
    check_mode(mode)
    check_degree(d)
    chi = chi3_leading(c, method, notes)
    h2 = h2chi_correction_3(c, method, notes)
    curve = curve_correction_3(d, c, mode, l_bound, method, notes)
    return ((chi + h2).specialize_degree(d) - curve).drop_unused()


# ---------------------------------------------------------------------------
# Census of the pieces left out of the leading sums
# ---------------------------------------------------------------------------

def dropped_census_3(c: int, d: int | None = None, n: int | None = None) -> dict[str, int]:
    """
    Pieces at a fixed n that the leading sums ignore: R^1 pieces with p = 0,
    pieces in the Flenner gap 0 < (d-4)q - p <= 2d, and BOUNDARY pieces.
    """
    n = n or get_settings().census_n
    c_val = check_c(c)
    region, p, q = r1_piece_3(c_val)
    counts: Counter[str] = Counter({"p_zero": 0, "flenner_gap": 0})
    for point in enumerate_region(region, {"n": n}):
        at = {"n": n, **dict(zip(region.variables, point))}
        p_val, q_val = p.evaluate(at), q.evaluate(at)
        if p_val == 0:
            counts["p_zero"] += 1
        elif d is not None and 0 < (d - 4) * q_val - p_val <= 2 * d:
            counts["flenner_gap"] += 1
    census = boundary_census(chi3_family(c_val), n, H2Context(degree=d))
    counts["boundary"] = census["BOUNDARY"]
    logger.debug(f"dropped_census_3 c={c} d={d} n={n}: {dict(counts)}")
    return dict(counts)


def weights_text_3(c: Param) -> str:
    if _symbolic(c):
        return f"O_3(({c}-1)n, n)"
    b = check_c(c) - 1
    return f"O_3({format_rational(b)}n, n)"


def build_report_3(d: int | str = "d", c: Param = 3, mode: str = "relaxed_region",
                   l_bound: LBound | None = None, method: Method = "auto",
                   threshold: int | None = None) -> BigReport:
    notes: list[str] = []
    chi = chi3_leading(c, method, notes)
    h2 = h2chi_correction_3(c, method, notes)
    curve = curve_correction_3(d, c, mode, l_bound, method, notes)
    h0 = ((chi + h2).specialize_degree(d) - curve).drop_unused()
    if not _symbolic(c) and as_fraction(c).denominator == 1:
        census = dropped_census_3(int(as_fraction(c)), None if _symbolic(d) else d)
        notes.append("dropped at n={}: ".format(get_settings().census_n)
                     + ", ".join(f"{k}={v}" for k, v in sorted(census.items())))
    return BigReport(
        tower_level=3,
        weights=weights_text_3(c),
        degree=d,
        c=c if _symbolic(c) else format_rational(as_fraction(c)),
        mode=mode,
        chi_leading=chi,
        h2_chi_correction=h2,
        curve_correction=curve,
        h0_leading=h0,
        threshold=threshold,
        notes=tuple(notes),
    )
