"""
Recover polynomial dependence on a parameter (c or d) from integer grid runs.

Each grid point runs a full numeric pipeline; the results are interpolated
with fit_univariate, which checks the held-out points exactly.
"""
from __future__ import annotations

import logging
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import TypeVar

from jetbig.cohomology import LeadingForm
from jetbig.config import get_settings
from jetbig.ratpoly import RationalPoly, fit_univariate

logger = logging.getLogger("jetbig.pipelines")

V = TypeVar("V")


def grid_points(start: int, degree: int) -> list[int]:
    """degree+1 fit points plus the configured number of held-out points."""
    return list(range(start, start + degree + 1 + get_settings().held_out))


def evaluate_grid(fn: Callable[[int], V], points: Sequence[int],
                  threads: int | None = None) -> dict[int, V]:
    """fn at every grid point; independent points run on a thread pool."""
    threads = threads or get_settings().threads
    if threads <= 1 or len(points) <= 1:
        return {x: fn(x) for x in points}
    results: dict[int, V] = {}
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = {pool.submit(fn, x): x for x in points}
        for future in as_completed(futures):
            results[futures[future]] = future.result()
    return {x: results[x] for x in sorted(results)}


def fit_poly_over(fn: Callable[[int], RationalPoly], variable: str, start: int,
                  degree: int) -> RationalPoly:
    values = evaluate_grid(fn, grid_points(start, degree))
    poly = fit_univariate(list(values.items()), degree, variable)
    logger.info(f"grid fit over {variable} in {list(values)}: degree {degree}")
    return poly


def fit_form_over(fn: Callable[[int], LeadingForm], variable: str, start: int,
                  degree: int) -> LeadingForm:
    values = evaluate_grid(fn, grid_points(start, degree))
    a = fit_univariate([(x, f.a) for x, f in values.items()], degree, variable)
    b = fit_univariate([(x, f.b) for x, f in values.items()], degree, variable)
    logger.info(f"grid fit over {variable} in {list(values)}: degree {degree}")
    return LeadingForm(a=a, b=b)
