"""
Top Riemann-Roch terms on X_1 and X_2, and Euler characteristics on curves.

Only the c1^N/N! term of Hirzebruch-Riemann-Roch is evaluated; it carries
the highest power of n in every sum the pipelines take.
"""
from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import TypeVar

from jetbig.cohomology import LeadingForm, UnsupportedLevelError, integrate, tower_dimension
from jetbig.ratpoly import PolyLike, RationalPoly
from jetbig.schemas import FrozenModel
from jetbig.tower import LineBundleSpec, c1_of

SUPPORTED_LEVELS = (1, 2)

T = TypeVar("T", RationalPoly, Fraction, int)


class ChiTerm(FrozenModel):
    spec: LineBundleSpec
    summand: LeadingForm

    @property
    def level(self) -> int:
        return self.spec.level


def chi_top_term(spec: LineBundleSpec) -> ChiTerm:
    """integrate(c1(L)^N) / N! with N = dim X_level."""
    if spec.level not in SUPPORTED_LEVELS:
        raise UnsupportedLevelError(
            f"top-term Riemann-Roch is implemented on levels {SUPPORTED_LEVELS}, got {spec.level}"
        )
    dim = tower_dimension(spec.level)
    power = c1_of(spec) ** dim
    return ChiTerm(spec=spec, summand=integrate(power).scale(Fraction(1, factorial(dim))))


def surface_chi_top_term(a: PolyLike, t: PolyLike) -> LeadingForm:
    """Top term of chi(S^a T_X^* (x) K_X^t), read on X_1 as O_1(a) (x) pi^*K^t."""
    return chi_top_term(LineBundleSpec(level=1, kx_exponent=t, weights=(a,))).summand


def curve_chi_exact(p: T, q: T, d: T) -> T:
    """chi of S^p T_X^* (x) K^q restricted to a general curve in |O_X((d-4)q - p)|."""
    half = Fraction(1, 2)
    bracket = (p * half + q) * d * (d - 4) - ((q + 1) * (d - 4) - p) * d * half
    return (p + 1) * bracket * (q * (d - 4) - p)


def curve_chi_leading(p: T, q: T, d: T) -> T:
    """Degree-3 part in (p, q) of curve_chi_exact."""
    half = Fraction(1, 2)
    return p * q * (p + q) * half * d * (d - 4) ** 2 - p ** 3 * half * d * (d - 3)
