"""
Line bundles on the tower and the graded pushdown to X_1.

A LineBundleSpec on level j is pi^*K_X^e (x) O_1(a_1) (x) ... (x) O_j(a_j).
Pushing O_j(m) (x) twist down one level gives S^m V_{j-1}^* (x) twist, whose
graded pieces are O_{j-1}(m-i) (x) T_{j-1,j-2}^{*i} (x) twist, 0 <= i <= m.

Usage:
    family = push_to_base_family(3, [2 * n, n])
    family.region.variables          # ("k", "l")
    family.member.weights[0]         # 3n - 4k - 3l, with kx_exponent k + l
"""
from __future__ import annotations

import logging
from collections import Counter
from collections.abc import Mapping, Sequence
from itertools import product
from typing import Literal

from pydantic import field_validator, model_validator

from jetbig.cohomology import CohomClass, _check_level
from jetbig.lattice.region import Constraint, Region, enumerate_region
from jetbig.ratpoly import PolyLike, RationalPoly, Scalar, as_fraction
from jetbig.schemas import FrozenModel, coerce_poly

logger = logging.getLogger("jetbig.tower")

INDEX_NAMES = ("k", "l", "j", "i")
_SAMPLE_N = (1, 2, 3, 5, 8)
_SAMPLE_PARAM = (3, 4, 5, 7)


class NonEffectiveWeightError(ValueError):
    """An intermediate fiber weight is negative somewhere on the region."""


class PreconditionError(ValueError):
    """Input outside the domain of the formula."""


# ---------------------------------------------------------------------------
# Line bundles
# ---------------------------------------------------------------------------

class LineBundleSpec(FrozenModel):
    level: int
    kx_exponent: RationalPoly = RationalPoly.zero()
    weights: tuple[RationalPoly, ...] = ()

    @field_validator("kx_exponent", mode="before")
    @classmethod
    def _poly(cls, v: object) -> RationalPoly:
        return coerce_poly(v)

    @field_validator("weights", mode="before")
    @classmethod
    def _polys(cls, v: object) -> tuple[RationalPoly, ...]:
        return tuple(coerce_poly(w) for w in v)

    @model_validator(mode="after")
    def _shape(self) -> LineBundleSpec:
        _check_level(self.level)
        if len(self.weights) != self.level:
            raise ValueError(f"level {self.level} needs {self.level} weights, "
                             f"got {len(self.weights)}")
        return self

    @classmethod
    def trivial(cls, level: int) -> LineBundleSpec:
        return cls(level=level, weights=(0,) * level)

    @classmethod
    def tautological(cls, level: int, weights: Sequence[PolyLike]) -> LineBundleSpec:
        """O_level(a_1, ..., a_level); shorter weight lists are right-aligned (lower a_i = 0)."""
        if len(weights) > level:
            raise ValueError(f"{len(weights)} weights do not fit level {level}")
        padded = [0] * (level - len(weights)) + list(weights)
        return cls(level=level, weights=padded)

    def lift(self, level: int) -> LineBundleSpec:
        if level < self.level:
            raise ValueError(f"cannot lift level {self.level} bundle to level {level}")
        pad = (RationalPoly.zero(),) * (level - self.level)
        return LineBundleSpec(level=level, kx_exponent=self.kx_exponent,
                              weights=self.weights + pad)

    def tensor(self, other: LineBundleSpec) -> LineBundleSpec:
        level = max(self.level, other.level)
        a, b = self.lift(level), other.lift(level)
        return LineBundleSpec(level=level, kx_exponent=a.kx_exponent + b.kx_exponent,
                              weights=tuple(x + y for x, y in zip(a.weights, b.weights)))

    def power(self, m: PolyLike) -> LineBundleSpec:
        factor = coerce_poly(m)
        return LineBundleSpec(level=self.level, kx_exponent=self.kx_exponent * factor,
                              weights=tuple(w * factor for w in self.weights))

    def twist_top(self, amount: PolyLike) -> LineBundleSpec:
        weights = list(self.weights)
        weights[-1] = weights[-1] + coerce_poly(amount)
        return LineBundleSpec(level=self.level, kx_exponent=self.kx_exponent, weights=weights)

    @property
    def top_weight(self) -> RationalPoly:
        return self.weights[-1]

    def lowered(self) -> LineBundleSpec:
        """The bundle without its top tautological factor, on the level below."""
        return LineBundleSpec(level=self.level - 1, kx_exponent=self.kx_exponent,
                              weights=self.weights[:-1])

    def subs(self, params: Mapping[str, Scalar]) -> LineBundleSpec:
        return LineBundleSpec(level=self.level, kx_exponent=self.kx_exponent.subs(params),
                              weights=tuple(w.subs(params) for w in self.weights))

    def to_text(self) -> str:
        parts = []
        if self.kx_exponent:
            parts.append(f"K^({self.kx_exponent.to_text()})")
        for i, w in enumerate(self.weights, start=1):
            if w:
                parts.append(f"O_{i}({w.to_text()})")
        return " * ".join(parts) if parts else "O"


def det_dual(j: int) -> LineBundleSpec:
    """det V_j^* = pi^* det V_{j-1}^* (x) O_j(-1), with det V_0^* = K_X."""
    return LineBundleSpec(level=j, kx_exponent=1, weights=(-1,) * j)


def relative_cotangent(j: int) -> LineBundleSpec:
    """T_{j,j-1}^* = pi^* det V_{j-1}^* (x) O_j(-2)."""
    if j < 1:
        raise ValueError(f"relative cotangent needs level >= 1, got {j}")
    return det_dual(j - 1).lift(j).twist_top(-2)


def c1_of(spec: LineBundleSpec) -> CohomClass:
    """-e*c1 + sum a_i u_i."""
    result = CohomClass.c1(spec.level).scale(-spec.kx_exponent)
    for i, w in enumerate(spec.weights, start=1):
        result = result + CohomClass.u(i, spec.level).scale(w)
    return result


# ---------------------------------------------------------------------------
# Graded families
# ---------------------------------------------------------------------------

class GradedFamily(FrozenModel):
    index_variables: tuple[str, ...]
    region: Region
    member: LineBundleSpec

    def subs(self, params: Mapping[str, Scalar]) -> GradedFamily:
        return GradedFamily(index_variables=self.index_variables,
                            region=self.region.specialize(params),
                            member=self.member.subs(params))


def expand_sym_filtration(j: int, m: PolyLike, twist: LineBundleSpec, index: str = "i",
                          base: GradedFamily | None = None) -> GradedFamily:
    """
    Graded pieces of S^m V_j^* (x) twist on level j, indexed by `index` in [0, m].

    With `base`, the new index is appended to an existing family's region.
    """
    if twist.level != j:
        raise ValueError(f"twist lives on level {twist.level}, expected {j}")
    m = coerce_poly(m)
    i = RationalPoly.var(index)
    piece = relative_cotangent(j).power(i).twist_top(m - i)
    member = twist.tensor(piece)
    new = (Constraint.ge(i), Constraint.ge(m - i))
    if base is None:
        region = Region(variables=(index,), constraints=new)
        names: tuple[str, ...] = (index,)
    else:
        if index in base.index_variables:
            raise ValueError(f"index {index!r} already used by the family")
        region = Region(variables=base.region.variables + (index,),
                        constraints=base.region.constraints + new)
        names = base.index_variables + (index,)
    return GradedFamily(index_variables=names, region=region, member=member)


def _sample_assignments(region: Region, m: RationalPoly) -> list[dict[str, int]]:
    free = (set(region.parameters()) | set(m.free_variables())) - set(region.variables) - {"n"}
    names = sorted(free)
    out = []
    for n in _SAMPLE_N:
        for values in product(_SAMPLE_PARAM, repeat=len(names)):
            out.append({"n": n, **dict(zip(names, values))})
    return out


def _check_effective(region: Region, m: RationalPoly, level: int) -> None:
    for params in _sample_assignments(region, m):
        for point in enumerate_region(region, params):
            assignment = {**params, **dict(zip(region.variables, point))}
            if m.evaluate(assignment) < 0:
                raise NonEffectiveWeightError(
                    f"O_{level} weight {m.to_text()} is negative at {assignment}"
                )


def push_to_base_family(tower_level: int, weights: Sequence[PolyLike],
                        target_level: int | None = None,
                        index_names: Sequence[str] = INDEX_NAMES) -> GradedFamily:
    """
    Expand O_L(weights) (weights right-aligned to level L) stage by stage.

    Each stage pushes the top factor O_j(m) down to S^m V_{j-1}^* and splits
    it into graded pieces. The default target is X_1 for L <= 3 and X_{L-2}
    above, where the top-term Riemann-Roch evaluation takes over.
    """
    if target_level is None:
        target_level = max(1, tower_level - 2)
    if not 1 <= target_level <= tower_level:
        raise ValueError(f"target level {target_level} outside [1, {tower_level}]")
    member = LineBundleSpec.tautological(tower_level, weights)
    family = GradedFamily(index_variables=(), region=Region(variables=()), member=member)
    names = iter(index_names)
    while family.member.level > target_level:
        level = family.member.level
        m = family.member.top_weight
        _check_effective(family.region, m, level)
        try:
            index = next(names)
        except StopIteration:
            raise ValueError("ran out of index names") from None
        family = expand_sym_filtration(level - 1, m, family.member.lowered(), index, base=family)
    logger.debug(f"push_to_base_family: level {tower_level} -> {target_level}, "
                 f"indices {family.index_variables}")
    return family


# ---------------------------------------------------------------------------
# h^2 bookkeeping on X_1
# ---------------------------------------------------------------------------

H2Kind = Literal["VANISH", "R1_CASE", "BOUNDARY"]


class H2Context(FrozenModel):
    degree: int | None = None
    use_semistable: bool = True
    use_bogomolov: bool = True


class H2Class(FrozenModel):
    kind: H2Kind
    p: int | None = None
    q: int | None = None
    route: str = ""


class R1Descriptor(FrozenModel):
    """S^{sym_power} T_X (x) K_X^{k_twist}."""

    sym_power: RationalPoly
    k_twist: RationalPoly

    @field_validator("sym_power", "k_twist", mode="before")
    @classmethod
    def _poly(cls, v: object) -> RationalPoly:
        return coerce_poly(v)

    def cotangent_form(self) -> tuple[RationalPoly, RationalPoly]:
        """(a, t) with the bundle written as S^a T_X^* (x) K_X^t."""
        return self.sym_power, self.k_twist - self.sym_power

    def serre_dual_form(self) -> tuple[RationalPoly, RationalPoly]:
        """(a, t) of the Serre dual S^a T_X^* (x) K_X^t, whose h^1 agrees."""
        return self.sym_power, 1 - self.k_twist


def _integer(value: PolyLike, name: str) -> int:
    v = as_fraction(value)
    if v.denominator != 1:
        raise ValueError(f"{name} must be an integer, got {v}")
    return int(v)


def r1_direct_image(s: PolyLike, e: PolyLike) -> R1Descriptor:
    """R^1 pi_* of O_1(s) (x) pi^*K^e for s <= -2: S^{-s-2} T_X (x) K^{e-1}."""
    s_poly, e_poly = coerce_poly(s), coerce_poly(e)
    if s_poly.is_constant() and s_poly.constant_term() > -2:
        raise PreconditionError(f"R^1 formula needs s <= -2, got {s_poly.to_text()}")
    return R1Descriptor(sym_power=-s_poly - 2, k_twist=e_poly - 1)


def bogomolov_h0_vanishes(a: PolyLike, t: PolyLike, d: int) -> bool:
    """
    True when h^0(S^a T_X^* (x) tK_X) = 0 is certified on a degree-d surface.

    For a >= 1 the bundle embeds in S^a(Omega(1)) once t(d-4) <= a; for a = 0
    only negative multiples of an ample K_X are certified.
    """
    if d < 3:
        raise PreconditionError(f"needs a non-quadric surface (d >= 3), got d={d}")
    a_val, t_val = as_fraction(a), as_fraction(t)
    if a_val >= 1:
        return t_val * (d - 4) <= a_val
    return a_val == 0 and t_val * (d - 4) < 0


def classify_h2_piece(s: PolyLike, e: PolyLike, context: H2Context | None = None) -> H2Class:
    """Classify h^2 of O_1(s) (x) pi^*K^e on X_1."""
    context = context or H2Context()
    s_val, e_val = _integer(s, "s"), _integer(e, "e")
    if s_val == -1:
        return H2Class(kind="VANISH", route="direct_images")
    if s_val <= -2:
        return H2Class(kind="R1_CASE", p=-s_val - 2, q=e_val + s_val + 1, route="leray")
    if context.use_semistable and ((e_val >= 2) or (s_val >= 1 and e_val >= 1)):
        return H2Class(kind="VANISH", route="semistable")
    if context.use_bogomolov and context.degree is not None:
        if bogomolov_h0_vanishes(s_val, 1 - e_val - s_val, context.degree):
            return H2Class(kind="VANISH", route="bogomolov")
    return H2Class(kind="BOUNDARY")


def r1_region(family: GradedFamily) -> Region:
    """The part of a level-1 family where the fiber weight is <= -2."""
    if family.member.level != 1:
        raise ValueError(f"expected a family on X_1, got level {family.member.level}")
    return family.region.with_constraints(Constraint.le(family.member.weights[0], -2))


def boundary_census(family: GradedFamily, n: int, context: H2Context | None = None,
                    params: Mapping[str, Scalar] | None = None) -> dict[str, int]:
    """Count region points per h^2 class at a fixed n."""
    if family.member.level != 1:
        raise ValueError(f"expected a family on X_1, got level {family.member.level}")
    assignment: dict[str, Scalar] = {**(params or {}), "n": n}
    s_poly = family.member.weights[0].subs(assignment)
    e_poly = family.member.kx_exponent.subs(assignment)
    counts: Counter[str] = Counter({"VANISH": 0, "R1_CASE": 0, "BOUNDARY": 0})
    for point in enumerate_region(family.region, assignment):
        at = dict(zip(family.region.variables, point))
        label = classify_h2_piece(s_poly.evaluate(at), e_poly.evaluate(at), context)
        counts[label.kind] += 1
    return dict(counts)
