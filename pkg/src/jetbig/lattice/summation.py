"""
Exact sums of polynomial summands over the integer points of a region.

The outer variables are enumerated; the innermost one is summed in closed
form with power sums S_r(N) = sum_{v=0}^{N} v^r built from Bernoulli
polynomials, so a sample costs one step per outer point.
"""
from __future__ import annotations

from collections.abc import Mapping, Sequence
from fractions import Fraction
from functools import lru_cache
from math import lcm

import sympy
from sympy.polys.appellseqs import bernoulli_poly

from jetbig.lattice.region import CompiledRegion, Region, enumerate_region
from jetbig.ratpoly import MissingVariableError, PolyLike, RationalPoly, Scalar

_X = sympy.Symbol("x")


@lru_cache(maxsize=None)
def _power_sum(r: int) -> tuple[tuple[int, ...], int]:
    """S_r(N) = (sum_i coeffs[i] N^i) / den, integer-valued on all integers N."""
    b = bernoulli_poly(r + 1, _X)
    expr = sympy.expand((b.subs(_X, _X + 1) - b.subs(_X, 0)) / (r + 1))
    coeffs = sympy.Poly(expr, _X).all_coeffs()[::-1]
    den = lcm(*(int(sympy.Rational(c).q) for c in coeffs))
    return tuple(int(sympy.Rational(c) * den) for c in coeffs), den


def power_sum(r: int, upper: int) -> int:
    """sum_{v=0}^{upper} v^r, extended polynomially to negative upper."""
    coeffs, den = _power_sum(r)
    acc = 0
    for c in reversed(coeffs):
        acc = acc * upper + c
    return acc // den


IntVector = dict[tuple[int, ...], list[int]]


def _integer_vectors(summands: Sequence[PolyLike], variables: Sequence[str],
                     params: Mapping[str, Scalar]) -> tuple[IntVector, list[int]]:
    """Summands with params substituted, scaled to integer coefficients, merged by monomial."""
    merged: dict[tuple[int, ...], list[int]] = {}
    scales: list[int] = []
    for s, summand in enumerate(summands):
        poly = RationalPoly.coerce(summand).subs(params)
        stray = [v for v in poly.free_variables() if v not in variables]
        if stray:
            raise MissingVariableError(f"summand has unassigned variables {stray}")
        poly = poly.with_variables(variables)
        scale = lcm(1, *(c.denominator for c in poly.terms.values()))
        scales.append(scale)
        for exps, coef in poly.terms.items():
            merged.setdefault(exps, [0] * len(summands))[s] = (coef * scale).numerator
    return merged, scales


def _peel(poly: IntVector, value: int) -> IntVector:
    out: IntVector = {}
    for exps, vec in poly.items():
        weight = value ** exps[0]
        key = exps[1:]
        acc = out.get(key)
        if acc is None:
            out[key] = [c * weight for c in vec]
        else:
            for i, c in enumerate(vec):
                acc[i] += c * weight
    return out


def exact_sums(region: Region, summands: Sequence[PolyLike],
               params: Mapping[str, Scalar]) -> tuple[Fraction, ...]:
    """Sums of several summands over the same region in one pass."""
    compiled = CompiledRegion(region, params)
    count = len(summands)
    poly, scales = _integer_vectors(summands, region.variables, params)
    totals = [0] * count
    m = len(region.variables)
    if compiled.empty:
        return tuple(Fraction(0) for _ in range(count))
    if m == 0:
        for vec in poly.values():
            for i, c in enumerate(vec):
                totals[i] += c
        return tuple(Fraction(t, s) for t, s in zip(totals, scales))

    def walk(depth: int, outer: tuple[int, ...], current: dict) -> None:
        lo, hi = compiled.bounds(depth, outer)
        if lo > hi:
            return
        if depth == m - 1:
            diffs: dict[int, int] = {}
            for (r,), vec in current.items():
                if r not in diffs:
                    diffs[r] = power_sum(r, hi) - power_sum(r, lo - 1)
                w = diffs[r]
                for i, c in enumerate(vec):
                    totals[i] += c * w
            return
        for v in range(lo, hi + 1):
            walk(depth + 1, outer + (v,), _peel(current, v))

    walk(0, (), poly)
    return tuple(Fraction(t, s) for t, s in zip(totals, scales))


def exact_sum(region: Region, summand: PolyLike, params: Mapping[str, Scalar]) -> Fraction:
    """Sum of the summand over every integer point of the region."""
    return exact_sums(region, [summand], params)[0]


def brute_force_sum(region: Region, summand: PolyLike, params: Mapping[str, Scalar]) -> Fraction:
    """Point-by-point evaluation; the slow oracle for exact_sum."""
    poly = RationalPoly.coerce(summand).subs(params)
    total = Fraction(0)
    for point in enumerate_region(region, params):
        total += poly.evaluate(dict(zip(region.variables, point)))
    return total
