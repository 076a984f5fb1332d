"""
Exact multivariate polynomials over the rationals, plus exact interpolation.

Every coefficient is a fractions.Fraction; no operation produces a float.
Polynomials carry an ordered variable list; arithmetic between polynomials
with different lists works on the union (left operand's variables first).

Usage:
    n, k = RationalPoly.symbols("n k")
    p = (3 * n - 4 * k) ** 2
    p.evaluate({"n": 2, "k": 1})                # Fraction(4)
    p.to_text()                                 # "9*n^2 - 24*n*k + 16*k^2"
    fit_univariate([(0, 0), (1, 1), (2, 4)], 2)  # n^2
"""
from __future__ import annotations

import logging
from collections import defaultdict
from collections.abc import Iterable, Mapping, Sequence
from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from fractions import Fraction
from typing import Union

import sympy
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

logger = logging.getLogger("jetbig.ratpoly")

Exponents = tuple[int, ...]
Scalar = Union[int, Fraction]


class MissingVariableError(ValueError):
    """An evaluation point does not assign every variable that occurs."""


class FitFailure(ValueError):
    """Sampled data is not polynomial of the claimed degree."""


def as_fraction(value: object) -> Fraction:
    """Coerce an exact scalar (int, Fraction, "num/den" string, constant poly)."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError(f"not an exact rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, RationalPoly):
        if not value.is_constant():
            raise ValueError(f"polynomial is not constant: {value.to_text()}")
        return value.constant_term()
    raise TypeError(f"not an exact rational: {value!r}")


def format_rational(value: Scalar) -> str:
    """Render as 'num/den' (or 'num' when the denominator is 1)."""
    value = as_fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def to_decimal_str(value: Scalar, places: int = 10) -> str:
    """Decimal rendering for presentation only (round half even)."""
    value = as_fraction(value)
    with localcontext() as ctx:
        ctx.prec = places + len(str(abs(value.numerator // value.denominator))) + 5
        exact = Decimal(value.numerator) / Decimal(value.denominator)
        return str(exact.quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_EVEN))


def _embed(terms: Mapping[Exponents, Fraction], src: Sequence[str],
           dst: Sequence[str]) -> dict[Exponents, Fraction]:
    positions = [dst.index(v) for v in src]
    width = len(dst)
    out: dict[Exponents, Fraction] = {}
    for exps, coef in terms.items():
        new = [0] * width
        for i, pos in enumerate(positions):
            new[pos] = exps[i]
        out[tuple(new)] = coef
    return out


class RationalPoly:
    """Sparse polynomial: exponent tuple (aligned with `variables`) -> Fraction."""

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str] = (),
                 terms: Mapping[Sequence[int], object] | None = None):
        names = tuple(variables)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names: {names}")
        clean: dict[Exponents, Fraction] = {}
        for exps, coef in (terms or {}).items():
            key = tuple(int(e) for e in exps)
            if len(key) != len(names):
                raise ValueError(f"exponent vector {key} does not match variables {names}")
            if any(e < 0 for e in key):
                raise ValueError(f"negative exponent in {key}")
            c = as_fraction(coef)
            if c:
                clean[key] = clean.get(key, Fraction(0)) + c
        self.variables = names
        self.terms = {k: v for k, v in clean.items() if v}

    @classmethod
    def _raw(cls, variables: tuple[str, ...], terms: dict[Exponents, Fraction]) -> RationalPoly:
        obj = object.__new__(cls)
        obj.variables = variables
        obj.terms = terms
        return obj

    # ------------------------------------------------------------------
    # Constructors
    # ------------------------------------------------------------------

    @classmethod
    def const(cls, value: Scalar, variables: Sequence[str] = ()) -> RationalPoly:
        c = as_fraction(value)
        names = tuple(variables)
        return cls._raw(names, {(0,) * len(names): c} if c else {})

    @classmethod
    def zero(cls, variables: Sequence[str] = ()) -> RationalPoly:
        return cls._raw(tuple(variables), {})

    @classmethod
    def var(cls, name: str, variables: Sequence[str] | None = None) -> RationalPoly:
        names = tuple(variables) if variables is not None else (name,)
        if name not in names:
            raise ValueError(f"{name!r} not among {names}")
        exps = tuple(1 if v == name else 0 for v in names)
        return cls._raw(names, {exps: Fraction(1)})

    @classmethod
    def symbols(cls, names: str | Sequence[str]) -> tuple[RationalPoly, ...]:
        if isinstance(names, str):
            names = names.replace(",", " ").split()
        return tuple(cls.var(name) for name in names)

    @classmethod
    def coerce(cls, value: object) -> RationalPoly:
        if isinstance(value, RationalPoly):
            return value
        if isinstance(value, str):
            return cls.parse(value)
        return cls.const(as_fraction(value))

    @classmethod
    def parse(cls, text: str, variables: Sequence[str] | None = None) -> RationalPoly:
        """
        Parse an expression such as "5/24*c^4 - c^3 + 41/40" (via sympy).

        Integer literals stay exact: 5/24 parses as Rational(5, 24).
        """
        transformations = standard_transformations + (convert_xor,)
        expr = parse_expr(text, transformations=transformations, evaluate=True)
        if expr.has(sympy.Float):
            raise ValueError(f"floating-point literal in {text!r}; write exact fractions")
        if variables is None:
            variables = sorted(str(s) for s in expr.free_symbols)
        names = tuple(variables)
        if not names:
            value = sympy.Rational(expr)
            return cls.const(Fraction(int(value.p), int(value.q)))
        gens = [sympy.Symbol(v) for v in names]
        poly = sympy.Poly(expr, *gens, domain="QQ")
        terms = {
            tuple(monom): Fraction(int(coef.p), int(coef.q))
            for monom, coef in poly.terms()
        }
        return cls(names, terms)

    # ------------------------------------------------------------------
    # Arithmetic
    # ------------------------------------------------------------------

    def _unify(self, other: RationalPoly):
        if self.variables == other.variables:
            return self.variables, self.terms, other.terms
        merged = self.variables + tuple(v for v in other.variables if v not in self.variables)
        return (merged,
                _embed(self.terms, self.variables, merged),
                _embed(other.terms, other.variables, merged))

    def _lift(self, other: object) -> RationalPoly | None:
        if isinstance(other, RationalPoly):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return RationalPoly.const(other, self.variables)
        return None

    def __add__(self, other: object) -> RationalPoly:
        rhs = self._lift(other)
        if rhs is None:
            return NotImplemented
        names, left, right = self._unify(rhs)
        out = dict(left)
        for exps, coef in right.items():
            total = out.get(exps, 0) + coef
            if total:
                out[exps] = total
            else:
                out.pop(exps, None)
        return RationalPoly._raw(names, out)

    __radd__ = __add__

    def __neg__(self) -> RationalPoly:
        return RationalPoly._raw(self.variables, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other: object) -> RationalPoly:
        rhs = self._lift(other)
        if rhs is None:
            return NotImplemented
        return self + (-rhs)

    def __rsub__(self, other: object) -> RationalPoly:
        lhs = self._lift(other)
        if lhs is None:
            return NotImplemented
        return lhs + (-self)

    def scale(self, factor: Scalar) -> RationalPoly:
        factor = as_fraction(factor)
        if not factor:
            return RationalPoly.zero(self.variables)
        return RationalPoly._raw(self.variables, {k: v * factor for k, v in self.terms.items()})

    def __mul__(self, other: object) -> RationalPoly:
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        if not isinstance(other, RationalPoly):
            return NotImplemented
        names, left, right = self._unify(other)
        out: dict[Exponents, Fraction] = defaultdict(Fraction)
        for e1, c1 in left.items():
            for e2, c2 in right.items():
                out[tuple(a + b for a, b in zip(e1, e2))] += c1 * c2
        return RationalPoly._raw(names, {k: v for k, v in out.items() if v})

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> RationalPoly:
        if isinstance(other, RationalPoly):
            other = as_fraction(other)
        if not isinstance(other, (int, Fraction)) or isinstance(other, bool):
            return NotImplemented
        if other == 0:
            raise ZeroDivisionError("polynomial division by zero")
        return self.scale(Fraction(1) / other)

    def __pow__(self, exponent: int) -> RationalPoly:
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError(f"exponent must be a non-negative integer, got {exponent!r}")
        result = RationalPoly.const(1, self.variables)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    # ------------------------------------------------------------------
    # Comparison
    # ------------------------------------------------------------------

    def _sparse_key(self) -> frozenset:
        return frozenset(
            (tuple(sorted((v, e) for v, e in zip(self.variables, exps) if e)), coef)
            for exps, coef in self.terms.items()
        )

    def __eq__(self, other: object) -> bool:
        rhs = self._lift(other)
        if rhs is None:
            return NotImplemented
        return self._sparse_key() == rhs._sparse_key()

    def __hash__(self) -> int:
        if self.is_constant():
            return hash(self.constant_term())
        return hash(self._sparse_key())

    def __bool__(self) -> bool:
        return bool(self.terms)

    # ------------------------------------------------------------------
    # Inspection
    # ------------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(exps) for exps in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.variables), Fraction(0))

    def free_variables(self) -> tuple[str, ...]:
        used = [False] * len(self.variables)
        for exps in self.terms:
            for i, e in enumerate(exps):
                if e:
                    used[i] = True
        return tuple(v for v, u in zip(self.variables, used) if u)

    def degree(self, var: str) -> int:
        """Degree in `var`; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        if var not in self.variables:
            return 0
        i = self.variables.index(var)
        return max(exps[i] for exps in self.terms)

    def total_degree(self, variables: Iterable[str] | None = None) -> int:
        if not self.terms:
            return -1
        idx = (range(len(self.variables)) if variables is None
               else [self.variables.index(v) for v in variables if v in self.variables])
        return max(sum(exps[i] for i in idx) for exps in self.terms)

    def coefficient(self, var: str, power: int) -> RationalPoly:
        """Coefficient of var^power, a polynomial in the remaining variables."""
        if var not in self.variables:
            return self.drop_unused() if power == 0 else RationalPoly.zero()
        i = self.variables.index(var)
        rest = self.variables[:i] + self.variables[i + 1:]
        out = {exps[:i] + exps[i + 1:]: c for exps, c in self.terms.items() if exps[i] == power}
        return RationalPoly._raw(rest, out)

    def coefficients(self, var: str) -> list[RationalPoly]:
        return [self.coefficient(var, p) for p in range(max(self.degree(var), 0) + 1)]

    def homogeneous_part(self, variables: Iterable[str], degree: int) -> RationalPoly:
        idx = [self.variables.index(v) for v in variables if v in self.variables]
        out = {e: c for e, c in self.terms.items() if sum(e[i] for i in idx) == degree}
        return RationalPoly._raw(self.variables, out)

    def drop_unused(self) -> RationalPoly:
        keep = self.free_variables()
        if keep == self.variables:
            return self
        idx = [self.variables.index(v) for v in keep]
        return RationalPoly._raw(keep, {tuple(e[i] for i in idx): c for e, c in self.terms.items()})

    def with_variables(self, variables: Sequence[str]) -> RationalPoly:
        """Re-express over `variables`, which must include every free variable."""
        names = tuple(variables)
        missing = set(self.free_variables()) - set(names)
        if missing:
            raise ValueError(f"cannot drop variables in use: {sorted(missing)}")
        trimmed = self.drop_unused()
        return RationalPoly._raw(names, _embed(trimmed.terms, trimmed.variables, names))

    # ------------------------------------------------------------------
    # Evaluation and substitution
    # ------------------------------------------------------------------

    def subs(self, assignment: Mapping[str, Scalar]) -> RationalPoly:
        """Partial evaluation: assigned variables are removed from the result."""
        idx = [i for i, v in enumerate(self.variables) if v in assignment]
        if not idx:
            return self
        values = {i: as_fraction(assignment[self.variables[i]]) for i in idx}
        keep = [i for i in range(len(self.variables)) if i not in values]
        names = tuple(self.variables[i] for i in keep)
        out: dict[Exponents, Fraction] = defaultdict(Fraction)
        for exps, coef in self.terms.items():
            for i, val in values.items():
                if exps[i]:
                    coef *= val ** exps[i]
            if coef:
                out[tuple(exps[i] for i in keep)] += coef
        return RationalPoly._raw(names, {k: v for k, v in out.items() if v})

    def evaluate(self, assignment: Mapping[str, Scalar]) -> Fraction:
        missing = [v for v in self.free_variables() if v not in assignment]
        if missing:
            raise MissingVariableError(f"no value for {', '.join(missing)}")
        return self.subs(assignment).constant_term()

    def substitute(self, var: str, value: RationalPoly | Scalar) -> RationalPoly:
        """Compose: replace `var` by a polynomial."""
        if var not in self.variables:
            return self
        value = RationalPoly.coerce(value)
        i = self.variables.index(var)
        rest = self.variables[:i] + self.variables[i + 1:]
        grouped: dict[int, dict[Exponents, Fraction]] = defaultdict(dict)
        for exps, coef in self.terms.items():
            grouped[exps[i]][exps[:i] + exps[i + 1:]] = coef
        result = RationalPoly.zero(rest)
        power = RationalPoly.const(1)
        for p in range(max(grouped, default=0) + 1):
            if p in grouped:
                result = result + RationalPoly._raw(rest, grouped[p]) * power
            power = power * value
        return result

    def diff(self, var: str) -> RationalPoly:
        if var not in self.variables:
            return RationalPoly.zero(self.variables)
        i = self.variables.index(var)
        out: dict[Exponents, Fraction] = {}
        for exps, coef in self.terms.items():
            if exps[i]:
                out[exps[:i] + (exps[i] - 1,) + exps[i + 1:]] = coef * exps[i]
        return RationalPoly._raw(self.variables, out)

    def antiderivative(self, var: str) -> RationalPoly:
        """The antiderivative in `var` with zero constant of integration."""
        base = self if var in self.variables else self.with_variables(self.variables + (var,))
        i = base.variables.index(var)
        out = {
            exps[:i] + (exps[i] + 1,) + exps[i + 1:]: coef / (exps[i] + 1)
            for exps, coef in base.terms.items()
        }
        return RationalPoly._raw(base.variables, out)

    # ------------------------------------------------------------------
    # Serialization
    # ------------------------------------------------------------------

    def sorted_terms(self) -> list[tuple[Exponents, Fraction]]:
        """Terms in graded-lex order over the variable list (highest first)."""
        return sorted(self.terms.items(), key=lambda t: (-sum(t[0]), tuple(-e for e in t[0])))

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts: list[str] = []
        for exps, coef in self.sorted_terms():
            mono = "*".join(
                v if e == 1 else f"{v}^{e}" for v, e in zip(self.variables, exps) if e
            )
            body = format_rational(abs(coef)) + (f"*{mono}" if mono else "")
            if not parts:
                parts.append(f"-{body}" if coef < 0 else body)
            else:
                parts.append(f"- {body}" if coef < 0 else f"+ {body}")
        return " ".join(parts)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"RationalPoly({self.to_text()!r}, variables={self.variables})"


PolyLike = Union[RationalPoly, int, Fraction]


def poly_eval(p: PolyLike, assignment: Mapping[str, Scalar]) -> Fraction:
    if isinstance(p, RationalPoly):
        return p.evaluate(assignment)
    return as_fraction(p)


# ---------------------------------------------------------------------------
# Interpolation
# ---------------------------------------------------------------------------

def _newton_coefficients(xs: Sequence[Fraction], ys: Sequence[object]) -> list:
    coef = list(ys)
    for j in range(1, len(xs)):
        for i in range(len(xs) - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    return coef


def _value_at(poly: RationalPoly, variable: str, x: Fraction) -> RationalPoly:
    return poly.subs({variable: x})


def fit_univariate(samples: Sequence[tuple[Scalar, object]], degree_bound: int,
                   variable: str = "n") -> RationalPoly:
    """
    Interpolate the unique polynomial of degree <= degree_bound through the
    first degree_bound+1 samples, then check every remaining sample exactly.

    Sample values may be rationals or RationalPoly (in other variables).
    Raises FitFailure when an extra sample disagrees.
    """
    if not samples:
        raise ValueError("cannot fit an empty sample list")
    if degree_bound < 0:
        raise ValueError(f"degree bound must be >= 0, got {degree_bound}")
    xs = [as_fraction(x) for x, _ in samples]
    if len(set(xs)) != len(xs):
        raise ValueError("sample abscissae are not distinct")
    need = degree_bound + 1
    if len(samples) < need:
        raise ValueError(f"degree {degree_bound} needs {need} samples, got {len(samples)}")

    ys = [RationalPoly.coerce(y) for _, y in samples]
    coef = _newton_coefficients(xs[:need], ys[:need])
    x = RationalPoly.var(variable)
    poly = coef[-1]
    for i in range(need - 2, -1, -1):
        poly = poly * (x - xs[i]) + coef[i]
    poly = poly.drop_unused()

    for xv, yv in zip(xs[need:], ys[need:]):
        got = _value_at(poly, variable, xv)
        if got != yv:
            raise FitFailure(
                f"held-out sample {variable}={format_rational(xv)} disagrees: "
                f"expected {yv.to_text()}, fit gives {got.to_text()}"
            )
    return poly


def _fit_grid(grid: Mapping[tuple, object], symbols: Sequence[str],
              bounds: Mapping[str, int]) -> RationalPoly:
    if not symbols:
        if set(grid) != {()}:
            raise ValueError("grid is not a full tensor grid")
        return RationalPoly.coerce(grid[()])
    head, rest = symbols[0], symbols[1:]
    slices: dict[Fraction, dict[tuple, object]] = defaultdict(dict)
    for point, value in grid.items():
        slices[as_fraction(point[0])][tuple(point[1:])] = value
    shapes = {frozenset(s) for s in slices.values()}
    if len(shapes) != 1:
        raise ValueError(f"grid is not a full tensor grid along {head!r}")
    if len(slices) < bounds[head] + 2:
        raise ValueError(
            f"{head!r} needs {bounds[head] + 1} fit values plus a held-out one, "
            f"got {len(slices)}"
        )
    fitted = [(x, _fit_grid(slices[x], rest, bounds)) for x in sorted(slices)]
    return fit_univariate(fitted, bounds[head], variable=head)


def fit_multiparameter(sample_grid: Mapping[tuple, object],
                       degree_bounds: Mapping[str, int]) -> RationalPoly:
    """
    Fit a polynomial on a tensor grid.

    Grid keys are tuples aligned with the key order of `degree_bounds`; each
    symbol needs degree+1 distinct values plus at least one held-out value.
    """
    if not sample_grid:
        raise ValueError("cannot fit an empty sample grid")
    symbols = list(degree_bounds)
    if any(len(point) != len(symbols) for point in sample_grid):
        raise ValueError(f"grid points must have one coordinate per symbol {symbols}")
    poly = _fit_grid(sample_grid, symbols, degree_bounds)
    for point, value in sample_grid.items():
        got = poly.subs(dict(zip(symbols, point)))
        if got != RationalPoly.coerce(value):
            raise FitFailure(f"grid point {point} disagrees with the fitted polynomial")
    logger.debug(f"fit_multiparameter: {len(sample_grid)} points, bounds {dict(degree_bounds)}")
    return poly
