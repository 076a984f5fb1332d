"""
Cohomology ring of the Demailly-Semple tower X_k over a surface X.

Generators: c1, c2 (Chern classes of X, degrees 1 and 2) and u_1..u_k with
u_j = c1(O_j(1)). Each level adds the Grothendieck relation

    u_j^2 + c1(V_{j-1}) u_j + c2(V_{j-1}) = 0,

with c1(V_j) = c1(V_{j-1}) + u_j and c2(V_j) = -u_j (c1(V_{j-1}) + 2 u_j).

Usage:
    x = CohomClass.u(1, level=1) ** 3
    integrate(x)                    # LeadingForm(a=1, b=-1), i.e. c1^2 - c2
"""
from __future__ import annotations

import logging
from collections.abc import Mapping
from fractions import Fraction
from functools import lru_cache
from typing import Union

from pydantic import field_validator, model_validator

from jetbig.ratpoly import RationalPoly, Scalar, as_fraction, format_rational
from jetbig.schemas import FrozenModel, coerce_fraction, coerce_poly

logger = logging.getLogger("jetbig.cohomology")

MAX_LEVEL = 8

Monomial = tuple[int, ...]   # (c1, c2, u_1, ..., u_k)
Coefficient = Union[RationalPoly, int, Fraction]


class UnsupportedLevelError(ValueError):
    """Tower level outside the supported range."""


def tower_dimension(level: int) -> int:
    """Complex dimension of X_level."""
    return 2 + level


def _check_level(level: int, low: int = 0) -> None:
    if not low <= level <= MAX_LEVEL:
        raise UnsupportedLevelError(f"level {level} outside [{low}, {MAX_LEVEL}]")


def _vanishes(mono: Monomial) -> bool:
    """True if some pulled-back part of the monomial exceeds the dimension of its level."""
    running = mono[0] + 2 * mono[1]
    if running > 2:
        return True
    for i, e in enumerate(mono[2:], start=1):
        running += e
        if running > 2 + i:
            return True
    return False


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


class CohomClass:
    """A polynomial in c1, c2, u_1..u_level with RationalPoly coefficients."""

    __slots__ = ("level", "terms")

    def __init__(self, level: int, terms: Mapping[Monomial, Coefficient] | None = None):
        _check_level(level)
        width = 2 + level
        clean: dict[Monomial, RationalPoly] = {}
        for mono, coef in (terms or {}).items():
            mono = tuple(mono)
            if len(mono) != width:
                raise ValueError(f"monomial {mono} does not fit level {level}")
            poly = RationalPoly.coerce(coef)
            if poly:
                clean[mono] = clean[mono] + poly if mono in clean else poly
        self.level = level
        self.terms = {m: c for m, c in clean.items() if c}

    @classmethod
    def _raw(cls, level: int, terms: dict[Monomial, RationalPoly]) -> CohomClass:
        obj = object.__new__(cls)
        obj.level = level
        obj.terms = terms
        return obj

    # --- constructors -------------------------------------------------------

    @classmethod
    def monomial(cls, level: int, c1: int = 0, c2: int = 0,
                 u: Mapping[int, int] | None = None,
                 coefficient: Coefficient = 1) -> CohomClass:
        """A single monomial, not reduced."""
        exps = [c1, c2] + [0] * level
        for j, e in (u or {}).items():
            if not 1 <= j <= level:
                raise ValueError(f"u_{j} does not exist on level {level}")
            exps[1 + j] = e
        return cls(level, {tuple(exps): coefficient})

    @classmethod
    def const(cls, value: Coefficient, level: int) -> CohomClass:
        return cls.monomial(level, coefficient=value)

    @classmethod
    def c1(cls, level: int) -> CohomClass:
        return cls.monomial(level, c1=1)

    @classmethod
    def c2(cls, level: int) -> CohomClass:
        return cls.monomial(level, c2=1)

    @classmethod
    def u(cls, j: int, level: int) -> CohomClass:
        return cls.monomial(level, u={j: 1})

    def lift(self, level: int) -> CohomClass:
        """Pull back to a higher level of the tower."""
        if level < self.level:
            raise ValueError(f"cannot lift level {self.level} class to level {level}")
        if level == self.level:
            return self
        _check_level(level)
        pad = (0,) * (level - self.level)
        return CohomClass._raw(level, {m + pad: c for m, c in self.terms.items()})

    # --- arithmetic ---------------------------------------------------------

    def _coerce(self, other: object) -> CohomClass | None:
        if isinstance(other, CohomClass):
            return other
        if isinstance(other, (RationalPoly, int, Fraction)) and not isinstance(other, bool):
            return CohomClass.const(other, self.level)
        return None

    def __add__(self, other: object) -> CohomClass:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        level = max(self.level, rhs.level)
        left, right = self.lift(level), rhs.lift(level)
        out = dict(left.terms)
        for mono, coef in right.terms.items():
            total = out[mono] + coef if mono in out else coef
            if total:
                out[mono] = total
            else:
                out.pop(mono, None)
        return CohomClass._raw(level, out)

    __radd__ = __add__

    def __neg__(self) -> CohomClass:
        return CohomClass._raw(self.level, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: object) -> CohomClass:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self + (-rhs)

    def __rsub__(self, other: object) -> CohomClass:
        lhs = self._coerce(other)
        if lhs is None:
            return NotImplemented
        return lhs + (-self)

    def scale(self, factor: Coefficient) -> CohomClass:
        factor = RationalPoly.coerce(factor)
        out = {m: c * factor for m, c in self.terms.items()}
        return CohomClass._raw(self.level, {m: c for m, c in out.items() if c})

    def __mul__(self, other: object) -> CohomClass:
        """Product, reduced to normal form."""
        if isinstance(other, (RationalPoly, int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        if not isinstance(other, CohomClass):
            return NotImplemented
        level = max(self.level, other.level)
        product = _raw_product(self.lift(level).terms, other.lift(level).terms)
        return reduce(CohomClass._raw(level, product))

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> CohomClass:
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError(f"exponent must be a non-negative integer, got {exponent!r}")
        result = CohomClass.const(1, self.level)
        for _ in range(exponent):
            result = result * self
        return result

    def __eq__(self, other: object) -> bool:
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return reduce(self - rhs).is_zero()

    __hash__ = None  # type: ignore[assignment]

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Largest complex degree among stored monomials (-1 when zero)."""
        if not self.terms:
            return -1
        return max(m[0] + 2 * m[1] + sum(m[2:]) for m in self.terms)

    def is_normal(self) -> bool:
        return all(max(m[2:], default=0) <= 1 and not _vanishes(m) for m in self.terms)

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        names = ["c1", "c2"] + [f"u{j}" for j in range(1, self.level + 1)]
        parts = []
        for mono in sorted(self.terms, reverse=True):
            factors = [n if e == 1 else f"{n}^{e}" for n, e in zip(names, mono) if e]
            coef = self.terms[mono]
            if coef.is_constant():
                text = format_rational(coef.constant_term())
            else:
                text = f"({coef.to_text()})"
            parts.append("*".join([text] + factors))
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"CohomClass(level={self.level}, {self.to_text()})"


def _raw_product(a: Mapping[Monomial, RationalPoly],
                 b: Mapping[Monomial, RationalPoly]) -> dict[Monomial, RationalPoly]:
    out: dict[Monomial, RationalPoly] = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            mono = _mono_mul(m1, m2)
            if _vanishes(mono):
                continue
            coef = c1 * c2
            out[mono] = out[mono] + coef if mono in out else coef
    return {m: c for m, c in out.items() if c}


# ---------------------------------------------------------------------------
# Relations and reduction
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def relation_classes(j: int) -> tuple[CohomClass, CohomClass]:
    """(c1(V_{j-1}), c2(V_{j-1})) in normal form, as classes on level j-1."""
    _check_level(j, low=1)
    if j == 1:
        return CohomClass.c1(0), CohomClass.c2(0)
    c1_prev, _ = relation_classes(j - 1)
    c1_prev = c1_prev.lift(j - 1)
    u = CohomClass.u(j - 1, j - 1)
    c1_new = c1_prev + u
    c2_new = -(u * (c1_prev + u.scale(2)))
    return c1_new, c2_new


@lru_cache(maxsize=None)
def _square_rule(j: int) -> tuple[tuple[Monomial, RationalPoly], ...]:
    """u_j^2 rewritten as -c1(V_{j-1}) u_j - c2(V_{j-1}), as level-j terms."""
    c1_v, c2_v = relation_classes(j)
    u = CohomClass.u(j, j)
    rhs = _raw_product((-c1_v.lift(j)).terms, u.terms)
    for mono, coef in (-c2_v.lift(j)).terms.items():
        rhs[mono] = rhs[mono] + coef if mono in rhs else coef
    logger.debug(f"square rule for u_{j}: {len(rhs)} terms")
    return tuple((m, c) for m, c in rhs.items() if c)


def reduce(x: CohomClass) -> CohomClass:
    """
    Normal form: every u_j appears to degree <= 1.

    The highest-index square is eliminated first; monomials that vanish for
    dimension reasons (see _vanishes) are dropped as soon as they appear.
    """
    level = x.level
    width = 2 + level
    result: dict[Monomial, RationalPoly] = {}
    stack = list(x.terms.items())
    while stack:
        mono, coef = stack.pop()
        if _vanishes(mono):
            continue
        top = next((i for i in range(width - 1, 1, -1) if mono[i] >= 2), None)
        if top is None:
            result[mono] = result[mono] + coef if mono in result else coef
            continue
        j = top - 1
        base = list(mono)
        base[top] -= 2
        pad = (0,) * (level - j)
        for rule_mono, rule_coef in _square_rule(j):
            stack.append((_mono_mul(tuple(base), rule_mono + pad), coef * rule_coef))
    return CohomClass._raw(level, {m: c for m, c in result.items() if c})


# ---------------------------------------------------------------------------
# Leading forms and integration
# ---------------------------------------------------------------------------

class ChernNumbers(FrozenModel):
    c1sq: Fraction
    c2: Fraction
    degree: int | None = None

    @field_validator("c1sq", "c2", mode="before")
    @classmethod
    def _exact(cls, v: object) -> Fraction:
        return coerce_fraction(v)

    @model_validator(mode="after")
    def _noether(self) -> ChernNumbers:
        if self.degree is not None and (self.c1sq + self.c2) % 12 != 0:
            raise ValueError(f"c1sq + c2 = {self.c1sq + self.c2} is not divisible by 12")
        return self


def chern_numbers_surface(d: int) -> ChernNumbers:
    """Chern numbers of a smooth degree-d surface in P^3."""
    if d < 1:
        raise ValueError(f"surface degree must be >= 1, got {d}")
    return ChernNumbers(c1sq=d * (d - 4) ** 2, c2=d * (d * d - 4 * d + 6), degree=d)


def surface_chern_polys(variable: str = "d") -> tuple[RationalPoly, RationalPoly]:
    """c1^2 and c2 of a degree-d surface as polynomials in d."""
    (d,) = RationalPoly.symbols(variable)
    return d * (d - 4) ** 2, d * (d * d - 4 * d + 6)


class LeadingForm(FrozenModel):
    """a*c1^2 + b*c2 with polynomial coefficients."""

    a: RationalPoly
    b: RationalPoly

    @field_validator("a", "b", mode="before")
    @classmethod
    def _poly(cls, v: object) -> RationalPoly:
        return coerce_poly(v)

    @classmethod
    def zero(cls) -> LeadingForm:
        return cls(a=0, b=0)

    def __add__(self, other: LeadingForm) -> LeadingForm:
        if not isinstance(other, LeadingForm):
            return NotImplemented
        return LeadingForm(a=self.a + other.a, b=self.b + other.b)

    def __sub__(self, other: LeadingForm) -> LeadingForm:
        if not isinstance(other, LeadingForm):
            return NotImplemented
        return LeadingForm(a=self.a - other.a, b=self.b - other.b)

    def __neg__(self) -> LeadingForm:
        return LeadingForm(a=-self.a, b=-self.b)

    def scale(self, factor: Coefficient) -> LeadingForm:
        factor = RationalPoly.coerce(factor)
        return LeadingForm(a=self.a * factor, b=self.b * factor)

    def is_zero(self) -> bool:
        return self.a.is_zero() and self.b.is_zero()

    def subs(self, assignment: Mapping[str, Scalar]) -> LeadingForm:
        return LeadingForm(a=self.a.subs(assignment), b=self.b.subs(assignment))

    def evaluate_chern(self, c1sq: Coefficient, c2: Coefficient) -> RationalPoly:
        return (self.a * RationalPoly.coerce(c1sq) + self.b * RationalPoly.coerce(c2)).drop_unused()

    def specialize(self, chern: ChernNumbers) -> RationalPoly:
        return self.evaluate_chern(chern.c1sq, chern.c2)

    def specialize_degree(self, d: int | str) -> RationalPoly:
        """Substitute the Chern numbers of a degree-d surface (d may be a symbol name)."""
        if isinstance(d, str):
            return self.evaluate_chern(*surface_chern_polys(d))
        return self.specialize(chern_numbers_surface(d))

    def numeric(self) -> tuple[Fraction, Fraction]:
        return as_fraction(self.a), as_fraction(self.b)

    def to_text(self) -> str:
        if self.a.is_constant() and self.b.is_constant():
            entries = [(self.a.constant_term(), "c1sq"), (self.b.constant_term(), "c2")]
            entries = [e for e in entries if e[0]]
            if not entries:
                return "0"
            entries.sort(key=lambda e: e[0] < 0)
            parts = []
            for coef, name in entries:
                body = f"{format_rational(abs(coef))}*{name}"
                if not parts:
                    parts.append(f"-{body}" if coef < 0 else body)
                else:
                    parts.append(f"- {body}" if coef < 0 else f"+ {body}")
            return " ".join(parts)
        return f"({self.a.to_text()})*c1sq + ({self.b.to_text()})*c2"


def integrate(x: CohomClass) -> LeadingForm:
    """
    Push a class down to the surface and read off a*c1^2 + b*c2.

    At each level j the u_j-linear coefficient of the normal form is kept;
    classes below top degree integrate to zero.
    """
    terms: dict[Monomial, RationalPoly] = reduce(x).terms
    for _ in range(x.level):
        terms = {m[:-1]: c for m, c in terms.items() if m[-1] == 1}
    zero = RationalPoly.zero()
    return LeadingForm(a=terms.get((2, 0), zero), b=terms.get((0, 1), zero))


def relation_residual(j: int) -> CohomClass:
    """u_j^2 + c1(V_{j-1}) u_j + c2(V_{j-1}), reduced (zero when the relations are consistent)."""
    c1_v, c2_v = relation_classes(j)
    u = CohomClass.u(j, j)
    raw = CohomClass._raw(j, {tuple([0, 0] + [0] * (j - 1) + [2]): RationalPoly.const(1)})
    return reduce(raw + u * c1_v.lift(j) + c2_v.lift(j))
