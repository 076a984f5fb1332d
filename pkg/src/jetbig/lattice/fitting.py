"""
Closed forms in n recovered from exact samples.

fit_closed_form samples exact_sum at n = n0, n0+P, n0+2P, ... per residue
class mod the period P, interpolates degree_in_n+1 of them and checks the
held-out rest exactly. Periods are tried in order: 1, then multiples of the
geometric period of the dilation polytope, up to max_period. Before moving
to the next period, one retry with a doubled n0 is made.

Usage:
    quasi = fit_closed_form(region, summand, degree_in_n=5, params={"c": 3})
    quasi.period, quasi.leading_coefficient()
"""
from __future__ import annotations

import csv
import logging
from collections.abc import Mapping, Sequence
from concurrent.futures import ThreadPoolExecutor, as_completed
from fractions import Fraction
from math import prod

from pydantic import field_validator

from jetbig.config import get_settings
from jetbig.lattice.region import Region, bounding_box, dilation_vertices, geometric_period
from jetbig.lattice.summation import exact_sums
from jetbig.ratpoly import (
    FitFailure,
    PolyLike,
    RationalPoly,
    Scalar,
    fit_univariate,
    format_rational,
)
from jetbig.schemas import FrozenModel

logger = logging.getLogger("jetbig.lattice")

_PERIOD_MULTIPLES = (1, 2, 3, 4, 6, 12)


class QuasiPoly(FrozenModel):
    period: int
    degree: int
    branches: dict[int, RationalPoly]
    n_start: int
    variable: str = "n"

    @field_validator("period")
    @classmethod
    def _positive(cls, v: int) -> int:
        if v < 1:
            raise ValueError(f"period must be >= 1, got {v}")
        return v

    def leading_coefficient(self) -> RationalPoly:
        first = self.branches[min(self.branches)]
        return first.coefficient(self.variable, self.degree)

    def evaluate(self, n: int) -> Fraction:
        residue = n % self.period
        if residue not in self.branches:
            raise ValueError(f"residue {residue} mod {self.period} was not fitted")
        return self.branches[residue].evaluate({self.variable: n})


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------

def sample_sums(region: Region, summands: Sequence[PolyLike], params: Mapping[str, Scalar],
                ns: Sequence[int], variable: str = "n",
                threads: int | None = None) -> dict[int, tuple[Fraction, ...]]:
    """exact_sums at each n; independent cells run on a thread pool."""
    threads = threads or get_settings().threads
    results: dict[int, tuple[Fraction, ...]] = {}
    if threads <= 1 or len(ns) <= 1:
        for n in ns:
            results[n] = exact_sums(region, summands, {**params, variable: n})
        return results
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = {
            pool.submit(exact_sums, region, summands, {**params, variable: n}): n for n in ns
        }
        for future in as_completed(futures):
            results[futures[future]] = future.result()
    return {n: results[n] for n in sorted(results)}


def dump_samples_csv(path: str, rows: Sequence[Mapping[str, object]]) -> int:
    """Write sample rows (params..., n, value) with exact values as num/den."""
    if not rows:
        return 0
    columns = list(rows[0])
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([
                format_rational(row[c]) if isinstance(row[c], (int, Fraction)) else row[c]
                for c in columns
            ])
    logger.info(f"Wrote {len(rows)} sample rows to {path}")
    return len(rows)


# ---------------------------------------------------------------------------
# Period schedule and cost
# ---------------------------------------------------------------------------

def candidate_periods(region: Region, params: Mapping[str, Scalar], max_period: int,
                      variable: str = "n") -> list[int]:
    base = geometric_period(region, params, variable)
    periods = {1} | {base * m for m in _PERIOD_MULTIPLES}
    return sorted(p for p in periods if p <= max_period)


def _residues(period: int) -> tuple[int, ...]:
    if period <= get_settings().full_branch_limit:
        return tuple(range(period))
    return (0,)


def _branch_ns(residue: int, period: int, n0: int, count: int) -> list[int]:
    start = n0 + (residue - n0) % period
    return [start + period * i for i in range(count)]


def estimate_fit_cost(region: Region, params: Mapping[str, Scalar], degree_in_n: int,
                      period: int, variable: str = "n") -> int:
    """Rough count of outer lattice points visited by a fit at the given period."""
    settings = get_settings()
    per_branch = degree_in_n + 1 + settings.held_out
    n0 = 3 * max(degree_in_n, 1)
    n_max = n0 + period * per_branch
    box = bounding_box(dilation_vertices(region, params, variable))
    widths = [hi - lo for lo, hi in box[:-1]]
    outer = prod(int(w * n_max) + 1 for w in widths) if widths else 1
    return outer * per_branch * len(_residues(period))


# ---------------------------------------------------------------------------
# Fitting
# ---------------------------------------------------------------------------

def _fit_at_period(region: Region, summands: Sequence[PolyLike], degree_in_n: int,
                   params: Mapping[str, Scalar], period: int, n0: int, variable: str,
                   cache: dict[int, tuple[Fraction, ...]]) -> list[QuasiPoly]:
    count = degree_in_n + 1 + get_settings().held_out
    residues = _residues(period)
    plan = {r: _branch_ns(r, period, n0, count) for r in residues}
    missing = sorted({n for ns in plan.values() for n in ns} - set(cache))
    cache.update(sample_sums(region, summands, params, missing, variable))
    logger.debug(f"fit: period {period}, n0 {n0}, residues {residues}, {len(missing)} new samples")

    fits: list[QuasiPoly] = []
    for s in range(len(summands)):
        branches = {
            r: fit_univariate([(n, cache[n][s]) for n in ns], degree_in_n, variable)
            for r, ns in plan.items()
        }
        leads = {b.coefficient(variable, degree_in_n) for b in branches.values()}
        if len(leads) > 1:
            raise FitFailure(f"leading coefficient differs across residues mod {period}")
        fits.append(QuasiPoly(period=period, degree=degree_in_n, branches=branches,
                              n_start=n0, variable=variable))
    return fits


def fit_closed_forms(region: Region, summands: Sequence[PolyLike], degree_in_n: int,
                     params: Mapping[str, Scalar] | None = None, max_period: int | None = None,
                     variable: str = "n", n_start: int | None = None) -> list[QuasiPoly]:
    """fit_closed_form for several summands sharing one set of samples."""
    params = dict(params or {})
    max_period = max_period or get_settings().max_period
    n0 = n_start or 3 * max(degree_in_n, 1)
    cache: dict[int, tuple[Fraction, ...]] = {}
    periods = candidate_periods(region, params, max_period, variable)
    for period in periods:
        for start in (n0, 2 * n0):
            try:
                fits = _fit_at_period(region, summands, degree_in_n, params, period, start,
                                      variable, cache)
            except FitFailure as e:
                logger.debug(f"fit: period {period} from n0={start} failed: {e}")
                continue
            logger.info(f"fit: degree {degree_in_n}, period {period}, "
                        f"{len(cache)} samples, n0 {start}")
            return fits
        logger.warning(f"fit: period {period} failed, escalating")
    raise FitFailure(
        f"no quasi-polynomial of degree {degree_in_n} with period in {periods}; "
        f"the degree bound is probably wrong"
    )


def fit_closed_form(region: Region, summand: PolyLike, degree_in_n: int,
                    params: Mapping[str, Scalar] | None = None, max_period: int | None = None,
                    variable: str = "n", n_start: int | None = None) -> QuasiPoly:
    return fit_closed_forms(region, [summand], degree_in_n, params, max_period,
                            variable, n_start)[0]
