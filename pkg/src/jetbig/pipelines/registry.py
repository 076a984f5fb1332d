"""
Centralized verification registry.

CHECKS maps a group name to a function producing CheckRows. Published
constants live in PUBLISHED; a mismatch against them is DISCREPANT (the
computed value is reported next to the published one), while a broken
internal identity is FAIL.
"""
from __future__ import annotations

import logging
from collections.abc import Callable, Iterable, Mapping
from fractions import Fraction
from typing import Literal

from jetbig.cohomology import (
    CohomClass,
    LeadingForm,
    chern_numbers_surface,
    integrate,
    reduce,
    relation_residual,
)
from jetbig.config import get_settings
from jetbig.lattice import Region, exact_sum, geometric_period, leading_coefficients
from jetbig.lattice.summation import brute_force_sum
from jetbig.pipelines import x3, x4
from jetbig.pipelines.threshold import (
    C_RANGE,
    NoWitnessError,
    c_grid,
    polynomial_bound,
    threshold_find,
    witness_c_d11,
    y_curve,
)
from jetbig.ratpoly import (
    FitFailure,
    RationalPoly,
    as_fraction,
    fit_univariate,
    format_rational,
    to_decimal_str,
)
from jetbig.rr import chi_top_term, surface_chi_top_term
from jetbig.schemas import FrozenModel

logger = logging.getLogger("jetbig.pipelines")

Status = Literal["PASS", "FAIL", "DISCREPANT"]
D9_TOLERANCE = Fraction(5, 10**8)


def _p(text: str) -> RationalPoly:
    return RationalPoly.parse(text)


def _lf(c1sq: str, c2: str) -> LeadingForm:
    return LeadingForm(a=Fraction(c1sq), b=Fraction(c2))


CHI3_C2 = "5/24*c**4 - c**3 + 7/3*c**2 - 31/12*c + 41/40"
CHI3_C1SQ = "-(1/24*c**4 - 1/6*c**3 + 1/3*c**2 - 1/3*c + 1/8)"

PUBLISHED: dict[str, object] = {
    "chi3.c3": _lf("-1", "249/60"),
    "chi3.c": LeadingForm(a=_p(CHI3_C1SQ), b=_p(CHI3_C2)),
    "h2chi3.c3": _lf("2013/1536", "-2073/480"),
    "h2chi3.f1": _p("5/81*c**4 - 47/162*c**3 + 229/324*c**2 - 145/162*c + 305/648"),
    "h2chi3.f2": _p("-2/9*c**4 + 10/9*c**3 - 25/9*c**2 + 125/36*c - 125/72"),
    "h2chi3.g1": _p("13/648*c**4 - 10/81*c**3 + 121/324*c**2 - 91/162*c + 28/81"),
    "h2chi3.g2": _p("-1/72*c**4 + 1/9*c**3 - 4/9*c**2 + 8/9*c - 32/45"),
    "assembly.c3": _lf("159/512", "-27/160"),
    "threshold3.cubic": _p(
        "d*(33/320*d**2 - 359523951/240100000*d + 799455603/240100000)"),
    "threshold3.threshold": 12,
    "curve11.quartic": _p("290521/795906*(c**4 - 2*c**3 + 2*c**2 - c + 1/5)"),
    "ycurve.quartic": _p("1/44217*(-394823/4*c**4 + 1575508*c**3 - 36295897/4*c**2"
                         " + 22513040*c - 40944629/2)"),
    "ycurve.y5": Fraction(981871, 88434),
    "chi4.621": _lf("-1213/12", "23629/60"),
    "chi4.21": _lf("1/6", "-61/30"),
    "h2chi4.form": _lf("3617245553/28449792", "-8184073/20160"),
    "fd.cubic": _p("d*(18461/1920*d**2 - 41723445050414378269/345738849132600000*d"
                   " + 90181735116469021057/345738849132600000)"),
    "fd.threshold": 10,
    "d9.decimal": Fraction("-304.5398797"),
}


class CheckRow(FrozenModel):
    group: str
    name: str
    expected: str
    computed: str
    status: Status


def _text(value: object) -> str:
    if isinstance(value, tuple):
        return ", ".join(_text(v) for v in value)
    if isinstance(value, LeadingForm):
        return value.to_text()
    if isinstance(value, RationalPoly):
        return value.to_text()
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return format_rational(value)
    return str(value)


def _row(group: str, name: str, expected: object, computed: object,
         published: bool = True) -> CheckRow:
    ok = expected == computed
    status: Status = "PASS" if ok else ("DISCREPANT" if published else "FAIL")
    if status == "DISCREPANT":
        logger.warning(f"{group}/{name}: published {_text(expected)}, computed {_text(computed)}")
    return CheckRow(group=group, name=name, expected=_text(expected), computed=_text(computed),
                    status=status)


def _holds(group: str, name: str, claim: str, ok: bool, detail: object = "") -> CheckRow:
    return CheckRow(group=group, name=name, expected=claim,
                    computed=_text(detail) if detail != "" else ("true" if ok else "false"),
                    status="PASS" if ok else "FAIL")


# ---------------------------------------------------------------------------
# Groups
# ---------------------------------------------------------------------------

def check_ring(pub: Mapping[str, object]) -> list[CheckRow]:
    rows = [
        _holds("ring", f"relation.level{j}", "residual 0", relation_residual(j).is_zero(),
               relation_residual(j).to_text())
        for j in range(1, 5)
    ]
    u1 = CohomClass.u(1, 1)
    c1 = CohomClass.c1(1)
    rules = [
        ("u1^3", u1 ** 3, _lf("1", "-1")),
        ("u1^2*c1", u1 * u1 * c1, _lf("-1", "0")),
        ("u1*c1^2", u1 * c1 * c1, _lf("1", "0")),
    ]
    rows += [_row("ring", f"integrate.{name}", form, integrate(x)) for name, x, form in rules]
    rows.append(_holds("ring", "reduce.c1^3", "0", reduce(c1 ** 3).is_zero(),
                       reduce(c1 ** 3).to_text()))

    family = x4.chi4_family((6, 2, 1))
    summand = chi_top_term(family.member).summand.scale(24)
    big_p = RationalPoly.parse("9*n - 4*k - 3*l")
    big_q = RationalPoly.parse("k + l")
    f_minus_g = summand.b + summand.a
    rows.append(_row("ring", "x2.f-g", 4 * big_p ** 4 + 8 * big_p ** 3 * big_q, f_minus_g,
                     published=False))

    bad = [d for d in range(1, get_settings().d_max + 1)
           if (chern_numbers_surface(d).c1sq + chern_numbers_surface(d).c2) % 12]
    rows.append(_holds("ring", "noether", f"12 | c1sq + c2 for d in 1..{get_settings().d_max}",
                       not bad, bad or "true"))
    return rows


def check_chi3(pub: Mapping[str, object]) -> list[CheckRow]:
    symbolic = x3.chi3_leading("c")
    return [
        _row("chi3", "c=3", pub["chi3.c3"], x3.chi3_leading(3)),
        _row("chi3", "c.c1sq", pub["chi3.c"].a, symbolic.a),
        _row("chi3", "c.c2", pub["chi3.c"].b, symbolic.b),
        _row("chi3", "c=3 from quartics", x3.chi3_leading(3), symbolic.subs({"c": 3}),
             published=False),
    ]


def check_h2chi3(pub: Mapping[str, object]) -> list[CheckRow]:
    h2 = x3.h2chi_correction_3("c")
    g = x3.chi3_leading("c") + h2
    return [
        _row("h2chi3", "c=3", pub["h2chi3.c3"], x3.h2chi_correction_3(3)),
        _row("h2chi3", "f1", pub["h2chi3.f1"], h2.a),
        _row("h2chi3", "f2", pub["h2chi3.f2"], h2.b),
        _row("h2chi3", "g1", pub["h2chi3.g1"], g.a),
        _row("h2chi3", "g2", pub["h2chi3.g2"], g.b),
    ]


def check_assembly(pub: Mapping[str, object]) -> list[CheckRow]:
    from_published = pub["chi3.c3"] + pub["h2chi3.c3"]
    computed = x3.chi3_leading(3) + x3.h2chi_correction_3(3)
    return [
        _row("assembly", "published chain", pub["assembly.c3"], from_published),
        _row("assembly", "computed", pub["assembly.c3"], computed),
    ]


def check_threshold3(pub: Mapping[str, object]) -> list[CheckRow]:
    cubic = x3.h0_bound_3("d", 3, "relaxed_region")
    bound = polynomial_bound(cubic)
    d_max = get_settings().d_max
    increasing = all(bound(d + 1) > bound(d) for d in range(12, d_max))
    return [
        _row("threshold3", "cubic", pub["threshold3.cubic"], cubic),
        _row("threshold3", "threshold", pub["threshold3.threshold"], threshold_find(bound)),
        _holds("threshold3", "d=11 negative", "< 0", bound(11) < 0, bound(11)),
        _holds("threshold3", "increasing", f"increasing on [12, {d_max}]", increasing),
    ]


def _matching_variants(expected: RationalPoly) -> list[str]:
    matches = []
    for variant in ("cn", "3n"):
        try:
            got = x3.curve_correction_3(11, "c", "exact_region", l_bound=variant)
        except FitFailure:
            continue
        if got == expected:
            matches.append(variant)
    return matches


def check_curve11(pub: Mapping[str, object]) -> list[CheckRow]:
    configured = get_settings().s_prime_l_bound
    matches = _matching_variants(pub["curve11.quartic"])
    return [
        _row("curve11", f"l<={configured}", pub["curve11.quartic"],
             x3.curve_correction_3(11, "c", "exact_region")),
        _holds("curve11", "matching l-bound", configured, configured in matches,
               ",".join(matches) or "none"),
    ]


def check_ycurve(pub: Mapping[str, object]) -> list[CheckRow]:
    y = y_curve()
    rows = [
        _row("ycurve", "y(c)", pub["ycurve.quartic"], y),
        _row("ycurve", "y(5)", pub["ycurve.y5"], y.evaluate({"c": 5})),
    ]
    claim = "some c in (4,7) with y(c) > 0"
    try:
        witness = witness_c_d11()
    except NoWitnessError as e:
        logger.warning(f"ycurve: {e}")
        grid = c_grid(*C_RANGE, get_settings().witness_step_value)
        best = max(grid, key=lambda c: y.evaluate({"c": c}))
        rows.append(_holds("ycurve", "witness", claim, False,
                           f"max y = {format_rational(y.evaluate({'c': best}))} "
                           f"at c={format_rational(best)}"))
        return rows
    rows.append(_holds("ycurve", "witness", claim, witness.y > 0,
                       f"c={format_rational(witness.c)} y={to_decimal_str(witness.y, 4)}"))
    return rows


def check_chi4(pub: Mapping[str, object]) -> list[CheckRow]:
    return [
        _row("chi4", "(6,2,1)", pub["chi4.621"], x4.chi4_leading((6, 2, 1))),
        _row("chi4", "(2,1)", pub["chi4.21"], x4.chi4_leading((2, 1))),
        _holds("chi4", "(0,0,0)", "0", x4.chi4_leading((0, 0, 0)).is_zero()),
    ]


def check_h2chi4(pub: Mapping[str, object]) -> list[CheckRow]:
    rows = [_row("h2chi4", "form", pub["h2chi4.form"], x4.h2chi_correction_4())]
    region, alpha, _, t = x4.r1_piece_4()
    form = surface_chi_top_term(alpha, t)
    for n in (4, 7):
        fast = exact_sum(region, form.a + form.b, {"n": n})
        slow = brute_force_sum(region, form.a + form.b, {"n": n})
        rows.append(_row("h2chi4", f"triple sum n={n}", slow, fast, published=False))
    return rows


def check_fd(pub: Mapping[str, object]) -> list[CheckRow]:
    cubic = x4.h0_bound_4("d", "relaxed_region")
    bound = polynomial_bound(cubic)
    return [
        _row("fd", "f(d)", pub["fd.cubic"], cubic),
        _row("fd", "threshold", pub["fd.threshold"], threshold_find(bound)),
        _holds("fd", "f(10) > 0", "> 0", bound(10) > 0, bound(10)),
    ]


def check_d9(pub: Mapping[str, object]) -> list[CheckRow]:
    value = x4.h0_bound_4(9, "exact_region").constant_term()
    expected = as_fraction(pub["d9.decimal"])
    close = abs(value - expected) <= D9_TOLERANCE
    return [CheckRow(group="d9", name="exact d=9", expected=to_decimal_str(expected, 7),
                     computed=f"{format_rational(value)} ~ {to_decimal_str(value, 10)}",
                     status="PASS" if close else "DISCREPANT")]


def _fit_vs_volume(group: str, name: str, region: Region, summands: list[RationalPoly],
                   degree: int) -> list[CheckRow]:
    """One FAIL/PASS row comparing a sampled fit with the polytope volume; none if unaffordable."""
    period = geometric_period(region, {})
    limit = get_settings().max_period
    if period > limit:
        logger.info(f"{group}: {name} has geometric period {period} > {limit}, no sampled fit")
        return []
    vol = leading_coefficients(region, summands, degree, method="volume")
    try:
        fit = leading_coefficients(region, summands, degree, method="fit")
    except FitFailure as e:
        return [_holds(group, f"{name} fit=volume", _text(vol.values), False, str(e))]
    return [_row(group, f"{name} fit=volume", vol.values, fit.values, published=False)]


def _curve_oracle(group: str, name: str, regions: tuple[Region, Region],
                  parts: tuple[RationalPoly, RationalPoly], degree: int) -> list[CheckRow]:
    region_a, region_b = regions
    if region_a == region_b:
        return _fit_vs_volume(group, name, region_a, list(parts), degree)
    return (_fit_vs_volume(group, f"{name} A", region_a, [parts[0]], degree)
            + _fit_vs_volume(group, f"{name} B", region_b, [parts[1]], degree))


def check_oracle(pub: Mapping[str, object]) -> list[CheckRow]:
    """Sampled fits against exact polytope volumes on X_3, and a fixed interpolation round trip."""
    rows = []
    family = x3.chi3_family(Fraction(3))
    form = chi_top_term(family.member).summand
    rows += _fit_vs_volume("oracle", "chi3 c=3", family.region, [form.a, form.b], 5)
    region, p, q = x3.r1_piece_3(Fraction(3))
    form = surface_chi_top_term(p, q)
    rows += _fit_vs_volume("oracle", "h2chi3 c=3", region, [form.a, form.b], 5)
    family4 = x4.chi4_family((6, 2, 1))
    form = chi_top_term(family4.member).summand
    rows += _fit_vs_volume("oracle", "chi4 (6,2,1)", family4.region, [form.a, form.b], 6)

    parts = x3.curve_parts(p, q)
    rows += _curve_oracle("oracle", "curve3 c=3 relaxed",
                          x3.curve_regions_3(Fraction(3), "relaxed_region"), parts, 5)
    _, p5, q5 = x3.r1_piece_3(Fraction(5))
    rows += _curve_oracle("oracle", "curve3 c=5 d=11",
                          x3.curve_regions_3(Fraction(5), "exact_region", 11),
                          x3.curve_parts(p5, q5), 5)

    target = RationalPoly.parse("3/7*n**4 - 2*n**3 + 5/2*n - 11")
    samples = [(n, target.evaluate({"n": n})) for n in range(-3, 4)]
    rows.append(_row("oracle", "interpolation round trip", target,
                     fit_univariate(samples, 4), published=False))
    return rows


def check_oracle4(pub: Mapping[str, object]) -> list[CheckRow]:
    """Sampled fits against exact polytope volumes on the X_4 triple regions."""
    region, alpha, beta, t = x4.r1_piece_4()
    form = surface_chi_top_term(alpha, t)
    rows = _fit_vs_volume("oracle4", "h2chi4", region, [form.a, form.b], 6)
    parts = x3.curve_parts(alpha, beta)
    rows += _curve_oracle("oracle4", "curve4 relaxed", x4.curve_regions_4("relaxed_region"),
                          parts, 6)
    rows += _curve_oracle("oracle4", "curve4 d=9", x4.curve_regions_4("exact_region", 9),
                          parts, 6)
    return rows


Check = Callable[[Mapping[str, object]], list[CheckRow]]

CHECKS: dict[str, Check] = {
    "ring": check_ring,
    "chi3": check_chi3,
    "h2chi3": check_h2chi3,
    "assembly": check_assembly,
    "threshold3": check_threshold3,
    "curve11": check_curve11,
    "ycurve": check_ycurve,
    "chi4": check_chi4,
    "h2chi4": check_h2chi4,
    "fd": check_fd,
    "d9": check_d9,
    "oracle": check_oracle,
    "oracle4": check_oracle4,
}

# Groups that integrate over the three-dimensional X_4 regions
SLOW_GROUPS: set[str] = {"h2chi4", "fd", "d9", "oracle4"}


def _perturb(value: object) -> object:
    if isinstance(value, LeadingForm):
        return value + LeadingForm(a=1, b=0)
    if isinstance(value, RationalPoly):
        return value + 1
    return as_fraction(value) + 1


def published_constants(inject_wrong: str | None = None) -> dict[str, object]:
    """PUBLISHED, with one entry shifted by 1 when inject_wrong names it."""
    constants = dict(PUBLISHED)
    if inject_wrong is not None:
        if inject_wrong not in constants:
            raise ValueError(f"unknown published constant {inject_wrong!r}; "
                             f"choose from {sorted(constants)}")
        constants[inject_wrong] = _perturb(constants[inject_wrong])
        logger.warning(f"verify: injected a wrong value for {inject_wrong}")
    return constants


def run_checks(only: Iterable[str] | None = None, skip_slow: bool = False,
               inject_wrong: str | None = None) -> list[CheckRow]:
    groups = list(only) if only else list(CHECKS)
    unknown = [g for g in groups if g not in CHECKS]
    if unknown:
        raise ValueError(f"unknown check group(s) {unknown}; choose from {list(CHECKS)}")
    constants = published_constants(inject_wrong)
    rows: list[CheckRow] = []
    for group in groups:
        if skip_slow and group in SLOW_GROUPS:
            logger.info(f"verify: skipping slow group {group}")
            continue
        logger.info(f"verify: running {group}")
        rows.extend(CHECKS[group](constants))
    return rows


def all_passed(rows: Iterable[CheckRow]) -> bool:
    return all(row.status == "PASS" for row in rows)
