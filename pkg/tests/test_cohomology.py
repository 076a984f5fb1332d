"""
Tests for src/jetbig/cohomology.py

Covers: the tower relations, reduction to normal form, integration down to
the surface, Chern numbers of hypersurfaces, and LeadingForm helpers.
"""
from fractions import Fraction

import pytest
from pydantic import ValidationError

from jetbig.cohomology import (
    ChernNumbers,
    CohomClass,
    LeadingForm,
    UnsupportedLevelError,
    chern_numbers_surface,
    integrate,
    reduce,
    relation_classes,
    relation_residual,
    surface_chern_polys,
    tower_dimension,
)
from jetbig.ratpoly import RationalPoly


def _form(a, b) -> LeadingForm:
    return LeadingForm(a=Fraction(a), b=Fraction(b))


# ---------------------------------------------------------------------------
# Relations and reduction
# ---------------------------------------------------------------------------

class TestRelations:

    @pytest.mark.parametrize("level", [1, 2, 3, 4])
    def test_relation_residual_vanishes(self, level):
        assert relation_residual(level).is_zero()

    def test_first_level_uses_surface_classes(self):
        c1_v, c2_v = relation_classes(1)
        assert c1_v == CohomClass.c1(0)
        assert c2_v == CohomClass.c2(0)

    def test_second_level_chern_classes(self):
        c1_v, c2_v = relation_classes(2)
        u1, c1 = CohomClass.u(1, 1), CohomClass.c1(1)
        assert c1_v == c1 + u1
        assert c2_v == -(u1 * (c1 + u1.scale(2)))

    def test_level_out_of_range(self):
        with pytest.raises(UnsupportedLevelError):
            relation_classes(0)
        with pytest.raises(UnsupportedLevelError):
            CohomClass.u(1, 99)

    def test_dimension(self):
        assert tower_dimension(3) == 5


class TestReduce:

    def test_cube_of_u1(self):
        u1 = CohomClass.u(1, 1)
        c1, c2 = CohomClass.c1(1), CohomClass.c2(1)
        expected = (c1 * c1 - c2) * u1
        assert reduce(u1 ** 3) == expected
        assert (u1 ** 3).is_normal()

    def test_surface_degree_overflow_vanishes(self):
        c1 = CohomClass.c1(1)
        assert reduce(c1 ** 3).is_zero()
        assert (CohomClass.c1(2) * CohomClass.c2(2)).is_zero()

    def test_products_are_normal(self):
        u1, u2 = CohomClass.u(1, 2), CohomClass.u(2, 2)
        x = (u1 + u2.scale(3)) ** 4
        assert x.is_normal()
        assert x.degree() <= 4

    def test_polynomial_coefficients(self):
        n = RationalPoly.var("n")
        u1 = CohomClass.u(1, 1)
        x = u1.scale(n) ** 3
        assert integrate(x) == LeadingForm(a=n ** 3, b=-(n ** 3))

    def test_lift_preserves_value(self):
        x = CohomClass.u(1, 1) * CohomClass.c1(1)
        assert x.lift(2).level == 2
        with pytest.raises(ValueError):
            x.lift(2).lift(1)


# ---------------------------------------------------------------------------
# Integration
# ---------------------------------------------------------------------------

class TestIntegrate:

    @pytest.mark.parametrize("build,expected", [
        (lambda u1, c1: u1 ** 3, _form(1, -1)),
        (lambda u1, c1: u1 * u1 * c1, _form(-1, 0)),
        (lambda u1, c1: u1 * c1 * c1, _form(1, 0)),
        (lambda u1, c1: u1 * u1, _form(0, 0)),
    ])
    def test_level_one_rules(self, build, expected):
        u1, c1 = CohomClass.u(1, 1), CohomClass.c1(1)
        assert integrate(build(u1, c1)) == expected

    def test_u1_times_c2(self):
        x = CohomClass.u(1, 1) * CohomClass.c2(1)
        assert integrate(x) == _form(0, 1)

    def test_level_two_top_degree(self):
        # u2 restricted to a fiber of X_2 -> X_1 integrates to 1
        x = CohomClass.u(2, 2) * CohomClass.u(1, 2) * CohomClass.c2(2)
        assert integrate(x) == _form(0, 1)

    def test_below_top_degree_is_zero(self):
        x = CohomClass.u(1, 2) * CohomClass.u(2, 2)
        assert integrate(x).is_zero()


# ---------------------------------------------------------------------------
# Surfaces in P^3
# ---------------------------------------------------------------------------

class TestChernNumbers:

    @pytest.mark.parametrize("d,c1sq,c2", [
        (1, 9, 3),
        (4, 0, 24),
        (5, 5, 55),
        (11, 539, 913),
    ])
    def test_hypersurface(self, d, c1sq, c2):
        chern = chern_numbers_surface(d)
        assert (chern.c1sq, chern.c2) == (c1sq, c2)

    @pytest.mark.parametrize("d", range(1, 40))
    def test_noether_divisibility(self, d):
        chern = chern_numbers_surface(d)
        assert (chern.c1sq + chern.c2) % 12 == 0

    def test_degree_zero_rejected(self):
        with pytest.raises(ValueError):
            chern_numbers_surface(0)

    def test_noether_enforced_for_hypersurfaces(self):
        with pytest.raises(ValidationError):
            ChernNumbers(c1sq=1, c2=1, degree=3)

    def test_polys_agree_with_numbers(self):
        c1sq, c2 = surface_chern_polys()
        chern = chern_numbers_surface(7)
        assert c1sq.evaluate({"d": 7}) == chern.c1sq
        assert c2.evaluate({"d": 7}) == chern.c2


class TestLeadingForm:

    def test_text_puts_positive_first(self):
        assert _form(-1, Fraction(249, 60)).to_text() == "83/20*c2 - 1*c1sq"

    def test_zero_text(self):
        assert LeadingForm.zero().to_text() == "0"

    def test_specialize_degree(self):
        form = _form(2, -1)
        assert form.specialize_degree(5) == 2 * 5 - 55

    def test_specialize_symbolic_degree(self):
        form = _form(1, 0)
        assert form.specialize_degree("d") == RationalPoly.parse("d*(d-4)^2")

    def test_arithmetic(self):
        a, b = _form(1, 2), _form(Fraction(1, 2), -2)
        assert a + b == _form(Fraction(3, 2), 0)
        assert a - b == _form(Fraction(1, 2), 4)
        assert a.scale(3) == _form(3, 6)
        assert (a - a).is_zero()

    def test_coerces_strings(self):
        form = LeadingForm(a="c^2 - 1", b=0)
        assert form.subs({"c": 2}) == _form(3, 0)
