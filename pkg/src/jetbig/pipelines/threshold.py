"""
Bigness thresholds in d and the search for a good weight parameter c.

threshold_find scans d downward from d_max and returns the start of the
run of positive values that reaches d_max.
"""
from __future__ import annotations

import logging
from collections.abc import Callable, Iterable
from fractions import Fraction

from jetbig.config import get_settings
from jetbig.pipelines.x3 import (
    chi3_leading,
    curve_correction_3,
    h0_bound_3,
    h2chi_correction_3,
)
from jetbig.pipelines.x4 import h0_bound_4
from jetbig.ratpoly import RationalPoly, Scalar, as_fraction, format_rational
from jetbig.schemas import FrozenModel

logger = logging.getLogger("jetbig.pipelines")

WITNESS_DEGREE = 11
C_RANGE = (Fraction(4), Fraction(7))


class NoWitnessError(ValueError):
    """No grid value of c gives a positive bound."""


class WitnessRow(FrozenModel):
    c: Fraction
    y: Fraction


class Witness(FrozenModel):
    c: Fraction
    y: Fraction
    rows: tuple[WitnessRow, ...]


def threshold_find(bound_fn: Callable[[int], Scalar], d_min: int = 5,
                   d_max: int | None = None) -> int | None:
    """Least d in [d_min, d_max] with bound_fn positive on all of [d, d_max]; None if none."""
    d_max = d_max or get_settings().d_max
    if d_min > d_max:
        raise ValueError(f"empty scan range [{d_min}, {d_max}]")
    found: int | None = None
    for d in range(d_max, d_min - 1, -1):
        if as_fraction(bound_fn(d)) <= 0:
            break
        found = d
    logger.info(f"threshold_find [{d_min}, {d_max}]: {found}")
    return found


def polynomial_bound(poly: RationalPoly, variable: str = "d") -> Callable[[int], Fraction]:
    return lambda d: poly.evaluate({variable: d})


def threshold_3(mode: str = "relaxed_region", c: int = 3, d_max: int | None = None) -> int | None:
    """Threshold for O_3(bn, n) at fixed c, from the cubic in d (relaxed) or per-d bounds."""
    if mode == "relaxed_region":
        return threshold_find(polynomial_bound(h0_bound_3("d", c, mode)), d_max=d_max)
    return threshold_find(lambda d: h0_bound_3(d, c, mode).constant_term(), d_max=d_max)


def threshold_4(mode: str = "relaxed_region", d_max: int | None = None) -> int | None:
    if mode == "relaxed_region":
        return threshold_find(polynomial_bound(h0_bound_4("d", mode)), d_max=d_max)
    return threshold_find(lambda d: h0_bound_4(d, mode).constant_term(), d_max=d_max)


# ---------------------------------------------------------------------------
# Scanning c
# ---------------------------------------------------------------------------

def c_grid(start: Fraction, stop: Fraction, step: Fraction,
           inclusive: bool = False) -> list[Fraction]:
    if step <= 0:
        raise ValueError(f"step must be positive, got {step}")
    if start >= stop:
        raise ValueError(f"empty range [{start}, {stop}]")
    values = []
    c = start if inclusive else start + step
    while c < stop or (inclusive and c == stop):
        values.append(c)
        c += step
    return values


def default_c_grid() -> list[Fraction]:
    return c_grid(*C_RANGE, get_settings().witness_step_value)


def optimize_c_bound(d: int, grid: Iterable[Fraction] | None = None,
                     first_positive: bool = False) -> tuple[Fraction, Fraction]:
    """
    Best (c, bound) over the grid for O_3(bn, n) on a degree-d surface.

    The chi and h^2 parts come from the fitted quartics in c; the curve part
    is integrated exactly at each rational c. With first_positive the scan
    stops at the first positive value.
    """
    points = list(grid) if grid is not None else default_c_grid()
    if not points:
        raise ValueError("empty c grid")
    for c in points:
        if c <= C_RANGE[0]:
            raise ValueError(f"the fitted quartics hold for c > 4, got {format_rational(c)}")
    chi = chi3_leading("c")
    h2 = h2chi_correction_3("c")
    base = (chi + h2).specialize_degree(d)
    best: tuple[Fraction, Fraction] | None = None
    for c in points:
        value = base.evaluate({"c": c}) - curve_correction_3(
            d, c, "exact_region", method="volume").constant_term()
        if best is None or value > best[1]:
            best = (c, value)
        if first_positive and value > 0:
            break
    assert best is not None
    logger.debug(f"optimize_c_bound d={d}: c={format_rational(best[0])} "
                 f"value={format_rational(best[1])}")
    return best


def threshold_3_optimized(d_max: int | None = None) -> tuple[int | None, Fraction | None]:
    """Threshold for O_3(bn, n) when c may vary over the grid; with the witness c at it."""
    witnesses: dict[int, Fraction] = {}

    def bound(d: int) -> Fraction:
        c, value = optimize_c_bound(d, first_positive=True)
        witnesses[d] = c
        return value

    found = threshold_find(bound, d_max=d_max)
    return found, witnesses.get(found) if found is not None else None


# ---------------------------------------------------------------------------
# y(c) at d = 11
# ---------------------------------------------------------------------------

def y_curve(d: int = WITNESS_DEGREE) -> RationalPoly:
    """The n^5 coefficient of the h^0 bound at degree d as a quartic in c."""
    return h0_bound_3(d, "c", "exact_region")


def y_rows(start: Fraction, stop: Fraction, step: Fraction, inclusive: bool = True,
           d: int = WITNESS_DEGREE) -> list[WitnessRow]:
    y = y_curve(d)
    return [WitnessRow(c=c, y=y.evaluate({"c": c})) for c in c_grid(start, stop, step, inclusive)]


def witness_c_d11(step: Fraction | None = None) -> Witness:
    """First grid c in (4, 7) with y(c) > 0, and the full grid for plotting."""
    step = step or get_settings().witness_step_value
    rows = y_rows(*C_RANGE, step, inclusive=False)
    for row in rows:
        if row.y > 0:
            logger.info(f"witness: c={format_rational(row.c)} y={format_rational(row.y)}")
            return Witness(c=row.c, y=row.y, rows=tuple(rows))
    raise NoWitnessError(f"y(c) <= 0 on every grid point of (4, 7) with step {step}")
