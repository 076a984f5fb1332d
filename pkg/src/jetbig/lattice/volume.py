"""
Leading coefficients from exact polytope integrals.

If the region at parameter n is n*P up to O(1) facet shifts, then

    sum over (n*P) of f(x, n) = n^(dim + deg f) * integral_P f_top(x, 1) dx + O(n^(dim + deg f - 1))

where f_top is the top homogeneous part of f in (x, n). The integral is
computed exactly by eliminating the last variable: every choice of active
lower bound L and upper bound U defines a cell {L >= other lowers,
U <= other uppers, U >= L} over which the fiber integral is F(U) - F(L).
"""
from __future__ import annotations

import logging
from collections.abc import Mapping, Sequence
from fractions import Fraction

from jetbig.lattice.region import NonFiniteRegionError, Region, dilation_constraints
from jetbig.ratpoly import PolyLike, RationalPoly, Scalar

logger = logging.getLogger("jetbig.lattice")

Linear = tuple[tuple[Fraction, ...], Fraction]   # sum(a_i x_i) + b >= 0


def _affine_poly(variables: Sequence[str], coeffs: Sequence[Fraction],
                 const: Fraction) -> RationalPoly:
    poly = RationalPoly.const(const, variables)
    for name, c in zip(variables, coeffs):
        if c:
            poly = poly + RationalPoly.var(name, variables).scale(c)
    return poly


def _difference(upper: Linear, lower: Linear) -> Linear:
    return tuple(a - b for a, b in zip(upper[0], lower[0])), upper[1] - lower[1]


def _integrate(variables: tuple[str, ...], constraints: list[Linear],
               integrand: RationalPoly) -> RationalPoly:
    live: list[Linear] = []
    for coeffs, const in constraints:
        if not any(coeffs):
            if const < 0:
                return RationalPoly.zero()
            continue
        live.append((coeffs, const))
    if not variables:
        return integrand
    if integrand.is_zero():
        return integrand

    x = variables[-1]
    outer_vars = variables[:-1]
    lowers: set[Linear] = set()
    uppers: set[Linear] = set()
    rest: list[Linear] = []
    for coeffs, const in live:
        pivot = coeffs[-1]
        outer = coeffs[:-1]
        if pivot > 0:
            lowers.add((tuple(-c / pivot for c in outer), -const / pivot))
        elif pivot < 0:
            uppers.add((tuple(c / -pivot for c in outer), const / -pivot))
        else:
            rest.append((outer, const))
    if not lowers or not uppers:
        raise NonFiniteRegionError(f"integration variable {x!r} is unbounded")

    antiderivative = integrand.antiderivative(x)
    total = RationalPoly.zero()
    ordered_lowers = sorted(lowers)
    ordered_uppers = sorted(uppers)
    for low in ordered_lowers:
        for up in ordered_uppers:
            cell = list(rest)
            cell.append(_difference(up, low))
            cell.extend(_difference(low, other) for other in ordered_lowers if other != low)
            cell.extend(_difference(other, up) for other in ordered_uppers if other != up)
            fiber = (antiderivative.substitute(x, _affine_poly(outer_vars, *up))
                     - antiderivative.substitute(x, _affine_poly(outer_vars, *low)))
            total = total + _integrate(outer_vars, cell, fiber)
    return total


def integrate_polytope(variables: Sequence[str], constraints: Sequence[Linear],
                       integrand: PolyLike) -> RationalPoly:
    """Exact integral of a polynomial over {x : sum(a_i x_i) + b >= 0 for all constraints}."""
    names = tuple(variables)
    poly = RationalPoly.coerce(integrand)
    return _integrate(names, [(tuple(Fraction(a) for a in c), Fraction(b)) for c, b in constraints],
                      poly).drop_unused()


def leading_by_volume(region: Region, summand: PolyLike, degree_in_n: int,
                      params: Mapping[str, Scalar], variable: str = "n") -> RationalPoly:
    """
    Coefficient of n^degree_in_n in the sum of `summand` over the region.

    `params` must fix every region parameter except `variable`; the summand
    may keep free symbols (e.g. d), which stay in the returned polynomial.
    """
    poly = RationalPoly.coerce(summand).subs(params)
    if poly.is_zero():
        return RationalPoly.zero()
    names = list(region.variables) + [variable]
    top_degree = poly.total_degree(names)
    dim = len(region.variables)
    if top_degree + dim > degree_in_n:
        raise ValueError(
            f"summand of degree {top_degree} over a {dim}-dimensional region can grow like "
            f"n^{top_degree + dim}, above the requested n^{degree_in_n}"
        )
    if top_degree + dim < degree_in_n:
        return RationalPoly.zero()
    top = poly.homogeneous_part(names, top_degree).subs({variable: 1})
    constraints = [(a, s) for a, s, _ in dilation_constraints(region, params, variable)]
    value = integrate_polytope(region.variables, constraints, top)
    logger.debug(f"leading_by_volume: {len(constraints)} facets, value {value.to_text()}")
    return value
