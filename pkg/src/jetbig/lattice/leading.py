"""Leading n-coefficient of lattice sums, by sampled fit or by exact volume."""
from __future__ import annotations

import logging
from collections.abc import Mapping, Sequence
from typing import Literal

from jetbig.config import get_settings
from jetbig.lattice.fitting import candidate_periods, estimate_fit_cost, fit_closed_forms
from jetbig.lattice.region import Region, geometric_period
from jetbig.lattice.volume import leading_by_volume
from jetbig.ratpoly import PolyLike, RationalPoly, Scalar
from jetbig.schemas import FrozenModel

logger = logging.getLogger("jetbig.lattice")

Method = Literal["fit", "volume", "auto"]


class LeadingResult(FrozenModel):
    values: tuple[RationalPoly, ...]
    method: Literal["fit", "volume"]
    period: int | None = None
    residues: int | None = None

    def note(self) -> str:
        if self.method == "fit":
            text = f"fit period={self.period}"
            if self.residues is not None and self.period and self.residues < self.period:
                text += f", residues {self.residues}/{self.period} verified"
            return text
        return "volume"


def _symbolic_summands(region: Region, summands: Sequence[PolyLike],
                       params: Mapping[str, Scalar], variable: str) -> bool:
    known = set(region.variables) | set(params) | {variable}
    return any(
        v not in known
        for s in summands
        for v in RationalPoly.coerce(s).free_variables()
    )


def choose_method(region: Region, summands: Sequence[PolyLike], degree_in_n: int,
                  params: Mapping[str, Scalar], variable: str = "n") -> Literal["fit", "volume"]:
    if _symbolic_summands(region, summands, params, variable):
        return "volume"
    settings = get_settings()
    base = geometric_period(region, params, variable)
    if base > settings.max_period:
        logger.info(f"auto: geometric period {base} exceeds {settings.max_period}, using volume")
        return "volume"
    periods = candidate_periods(region, params, settings.max_period, variable)
    worst = periods[1] if len(periods) > 1 else periods[0]
    cost = estimate_fit_cost(region, params, degree_in_n, worst, variable)
    if cost > settings.sample_budget:
        logger.info(f"auto: fit at period {worst} would visit ~{cost} points, using volume")
        return "volume"
    return "fit"


def leading_coefficients(region: Region, summands: Sequence[PolyLike], degree_in_n: int,
                         params: Mapping[str, Scalar] | None = None, method: Method = "auto",
                         variable: str = "n") -> LeadingResult:
    """
    Coefficient of n^degree_in_n of the sum of each summand over the region.

    "fit" samples and interpolates (verifying held-out samples), "volume"
    integrates the top-degree part over the dilation polytope, "auto" picks
    volume when a fit would exceed the configured sample budget or when the
    summands carry free symbols.
    """
    params = dict(params or {})
    if method == "auto":
        method = choose_method(region, summands, degree_in_n, params, variable)
    if method == "volume":
        values = tuple(leading_by_volume(region, s, degree_in_n, params, variable)
                       for s in summands)
        return LeadingResult(values=values, method="volume")
    fits = fit_closed_forms(region, summands, degree_in_n, params, variable=variable)
    return LeadingResult(values=tuple(f.leading_coefficient() for f in fits),
                         method="fit", period=fits[0].period if fits else 1,
                         residues=len(fits[0].branches) if fits else 1)


def leading_coefficient(region: Region, summand: PolyLike, degree_in_n: int,
                        params: Mapping[str, Scalar] | None = None, method: Method = "auto",
                        variable: str = "n") -> RationalPoly:
    return leading_coefficients(region, [summand], degree_in_n, params, method,
                                variable).values[0]
