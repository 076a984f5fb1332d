"""
Affine lattice regions: constraints, enumeration and dilation analysis.

A Region is an ordered list of integer variables plus constraints
`expr >= 0` or `expr > 0`, where each expr is affine in the variables once
the parameters (n, c, d, ...) are fixed. Every variable must be bounded on
both sides by constraints whose last variable (in region order) is itself.

Usage:
    k, l, n = RationalPoly.symbols("k l n")
    region = Region(variables=("k", "l"), constraints=(
        Constraint.ge(k), Constraint.ge(n - k),
        Constraint.ge(l), Constraint.ge(3 * n - 3 * k - l),
    ))
    list(enumerate_region(region, {"n": 1}))   # 5 points
"""
from __future__ import annotations

import logging
from collections.abc import Iterator, Mapping, Sequence
from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import NamedTuple

import sympy
from pydantic import field_validator

from jetbig.ratpoly import MissingVariableError, RationalPoly, Scalar
from jetbig.schemas import FrozenModel, coerce_poly

logger = logging.getLogger("jetbig.lattice")


class NonFiniteRegionError(ValueError):
    """Some region variable lacks a lower or upper bound."""


class NonAffineConstraintError(ValueError):
    """A constraint is not affine in the region variables."""


class Constraint(FrozenModel):
    expr: RationalPoly
    strict: bool = False

    @field_validator("expr", mode="before")
    @classmethod
    def _poly(cls, v: object) -> RationalPoly:
        return coerce_poly(v)

    @classmethod
    def ge(cls, lhs: object, rhs: object = 0) -> Constraint:
        return cls(expr=coerce_poly(lhs) - coerce_poly(rhs))

    @classmethod
    def gt(cls, lhs: object, rhs: object = 0) -> Constraint:
        return cls(expr=coerce_poly(lhs) - coerce_poly(rhs), strict=True)

    @classmethod
    def le(cls, lhs: object, rhs: object = 0) -> Constraint:
        return cls.ge(rhs, lhs)

    @classmethod
    def lt(cls, lhs: object, rhs: object = 0) -> Constraint:
        return cls.gt(rhs, lhs)

    def specialize(self, params: Mapping[str, Scalar]) -> Constraint:
        return Constraint(expr=self.expr.subs(params), strict=self.strict)

    def holds(self, assignment: Mapping[str, Scalar]) -> bool:
        value = self.expr.evaluate(assignment)
        return value > 0 if self.strict else value >= 0

    def to_text(self) -> str:
        return f"{self.expr.to_text()} {'>' if self.strict else '>='} 0"


class Region(FrozenModel):
    variables: tuple[str, ...]
    constraints: tuple[Constraint, ...] = ()

    def with_constraints(self, *constraints: Constraint) -> Region:
        return Region(variables=self.variables, constraints=self.constraints + tuple(constraints))

    def specialize(self, params: Mapping[str, Scalar]) -> Region:
        return Region(variables=self.variables,
                      constraints=tuple(c.specialize(params) for c in self.constraints))

    def parameters(self) -> tuple[str, ...]:
        names = {v for c in self.constraints for v in c.expr.free_variables()}
        return tuple(sorted(names - set(self.variables)))

    def contains(self, point: Sequence[int], params: Mapping[str, Scalar]) -> bool:
        assignment = dict(params)
        assignment.update(zip(self.variables, point))
        return all(c.holds(assignment) for c in self.constraints)

    def to_text(self) -> str:
        body = ", ".join(c.to_text() for c in self.constraints)
        return f"{{({', '.join(self.variables)}) : {body}}}"


# ---------------------------------------------------------------------------
# Compilation to integer affine bounds
# ---------------------------------------------------------------------------

class _Affine(NamedTuple):
    outer: tuple[int, ...]   # coefficients of the variables before the pivot
    pivot: int               # coefficient of the variable being bounded
    const: int
    strict: bool


def _affine_parts(expr: RationalPoly, variables: Sequence[str],
                  extra: Sequence[str] = ()) -> tuple[list[Fraction], list[Fraction], Fraction]:
    """Split an affine expr into (variable coefficients, extra coefficients, constant)."""
    allowed = set(variables) | set(extra)
    stray = [v for v in expr.free_variables() if v not in allowed]
    if stray:
        raise MissingVariableError(f"constraint {expr.to_text()} has unassigned {stray}")
    if expr.total_degree(list(variables) + list(extra)) > 1:
        raise NonAffineConstraintError(f"constraint {expr.to_text()} is not affine")
    coeffs = [expr.diff(v).constant_term() for v in variables]
    extras = [expr.diff(v).constant_term() for v in extra]
    return coeffs, extras, expr.subs({v: 0 for v in list(variables) + list(extra)}).constant_term()


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


class CompiledRegion:
    """A region with its parameters fixed, as integer bound tables per variable."""

    def __init__(self, region: Region, params: Mapping[str, Scalar]):
        self.variables = region.variables
        self.empty = False
        m = len(self.variables)
        self.lowers: list[list[_Affine]] = [[] for _ in range(m)]
        self.uppers: list[list[_Affine]] = [[] for _ in range(m)]
        for constraint in region.constraints:
            expr = constraint.expr.subs(params)
            coeffs, _, const = _affine_parts(expr, self.variables)
            scale = lcm(const.denominator, *(c.denominator for c in coeffs))
            ints = [int(c * scale) for c in coeffs]
            const_int = int(const * scale)
            depth = max((i for i, c in enumerate(ints) if c), default=-1)
            if depth < 0:
                if const_int < 0 or (constraint.strict and const_int == 0):
                    self.empty = True
                continue
            affine = _Affine(tuple(ints[:depth]), ints[depth], const_int, constraint.strict)
            (self.lowers if affine.pivot > 0 else self.uppers)[depth].append(affine)
        for i, name in enumerate(self.variables):
            if not self.lowers[i] or not self.uppers[i]:
                side = "lower" if not self.lowers[i] else "upper"
                raise NonFiniteRegionError(f"variable {name!r} has no {side} bound")

    def bounds(self, depth: int, outer: Sequence[int]) -> tuple[int, int]:
        """Inclusive integer range of variable `depth` given the outer point (may be empty)."""
        lo: int | None = None
        hi: int | None = None
        for a in self.lowers[depth]:
            rest = a.const + sum(c * v for c, v in zip(a.outer, outer))
            b = (-rest) // a.pivot + 1 if a.strict else _ceil_div(-rest, a.pivot)
            lo = b if lo is None or b > lo else lo
        for a in self.uppers[depth]:
            rest = a.const + sum(c * v for c, v in zip(a.outer, outer))
            q = -a.pivot
            b = _ceil_div(rest, q) - 1 if a.strict else rest // q
            hi = b if hi is None or b < hi else hi
        return lo, hi

    def points(self) -> Iterator[tuple[int, ...]]:
        if self.empty:
            return
        m = len(self.variables)
        if m == 0:
            yield ()
            return

        def walk(depth: int, outer: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
            lo, hi = self.bounds(depth, outer)
            for v in range(lo, hi + 1):
                point = outer + (v,)
                if depth == m - 1:
                    yield point
                else:
                    yield from walk(depth + 1, point)

        yield from walk(0, ())


def enumerate_region(region: Region, params: Mapping[str, Scalar]) -> Iterator[tuple[int, ...]]:
    """Integer points of the region in lexicographic order of its variables."""
    return CompiledRegion(region, params).points()


def count_points(region: Region, params: Mapping[str, Scalar]) -> int:
    return sum(1 for _ in enumerate_region(region, params))


# ---------------------------------------------------------------------------
# Dilation analysis: the region at parameter n is (approximately) n * P
# ---------------------------------------------------------------------------

def dilation_constraints(region: Region, params: Mapping[str, Scalar],
                         variable: str = "n") -> list[tuple[tuple[Fraction, ...], Fraction, bool]]:
    """
    Constraints of the dilation polytope P: (coefficients, n-slope, strict).

    Each region constraint sum(a_i x_i) + s*n + r >= 0 contributes
    sum(a_i x_i) + s >= 0; the constant r only moves facets by O(1).
    """
    out = []
    for constraint in region.constraints:
        expr = constraint.expr.subs(params)
        coeffs, (slope,), _ = _affine_parts(expr, region.variables, extra=(variable,))
        out.append((tuple(coeffs), slope, constraint.strict))
    return out


def _solve(rows: Sequence[tuple[Fraction, ...]],
           rhs: Sequence[Fraction]) -> tuple[Fraction, ...] | None:
    def rational(x: Fraction) -> sympy.Rational:
        return sympy.Rational(x.numerator, x.denominator)

    matrix = sympy.Matrix([[rational(a) for a in row] for row in rows])
    if matrix.det() == 0:
        return None
    solution = matrix.LUsolve(sympy.Matrix([rational(b) for b in rhs]))
    return tuple(Fraction(int(s.p), int(s.q)) for s in solution)


def dilation_vertices(region: Region, params: Mapping[str, Scalar],
                      variable: str = "n") -> list[tuple[Fraction, ...]]:
    """Vertices of the dilation polytope, sorted."""
    constraints = dilation_constraints(region, params, variable)
    m = len(region.variables)
    if m == 0:
        return [()]
    vertices: set[tuple[Fraction, ...]] = set()
    normals = [(a, s) for a, s, _ in constraints if any(a)]
    for subset in combinations(normals, m):
        point = _solve([a for a, _ in subset], [-s for _, s in subset])
        if point is None:
            continue
        if all(sum(c * x for c, x in zip(a, point)) + s >= 0 for a, s, _ in constraints):
            vertices.add(point)
    return sorted(vertices)


def geometric_period(region: Region, params: Mapping[str, Scalar], variable: str = "n") -> int:
    """lcm of the vertex denominators of the dilation polytope (1 when it has none)."""
    dens = [x.denominator for vertex in dilation_vertices(region, params, variable) for x in vertex]
    return lcm(1, *dens)


def bounding_box(vertices: Sequence[Sequence[Fraction]]) -> list[tuple[Fraction, Fraction]]:
    if not vertices:
        return []
    return [(min(v[i] for v in vertices), max(v[i] for v in vertices))
            for i in range(len(vertices[0]))]
