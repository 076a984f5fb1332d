"""
Tests for src/jetbig/rr.py

Covers: top-degree Riemann-Roch terms on X_1 and X_2, the surface form for
S^a T_X^* (x) tK_X, and the curve Euler characteristic with its leading part.
"""
from fractions import Fraction

import pytest

from jetbig.cohomology import LeadingForm, UnsupportedLevelError
from jetbig.ratpoly import RationalPoly
from jetbig.rr import (
    chi_top_term,
    curve_chi_exact,
    curve_chi_leading,
    surface_chi_top_term,
)
from jetbig.tower import LineBundleSpec


class TestChiTopTerm:

    def test_trivial_bundle_has_no_top_term(self):
        assert chi_top_term(LineBundleSpec.trivial(1)).summand.is_zero()
        assert chi_top_term(LineBundleSpec.trivial(2)).summand.is_zero()

    def test_o1_of_m(self):
        term = chi_top_term(LineBundleSpec(level=1, weights=(6,)))
        assert term.summand == LeadingForm(a=36, b=-36)
        assert term.level == 1

    def test_unsupported_level(self):
        with pytest.raises(UnsupportedLevelError):
            chi_top_term(LineBundleSpec.trivial(3))

    def test_symbolic_weights(self):
        a = RationalPoly.var("a")
        term = chi_top_term(LineBundleSpec(level=1, weights=(a,)))
        assert term.summand.a == (a ** 3).scale(Fraction(1, 6))


class TestSurfaceChi:

    @pytest.mark.parametrize("a,t,expected", [
        (0, 5, (0, 0)),
        (1, 0, (Fraction(1, 6), Fraction(-1, 6))),
        (2, 1, (Fraction(13, 3), Fraction(-4, 3))),
    ])
    def test_values(self, a, t, expected):
        form = surface_chi_top_term(a, t)
        assert form.numeric() == expected

    def test_general_formula(self):
        a, t = RationalPoly.symbols("a t")
        form = surface_chi_top_term(a, t)
        sixth = Fraction(1, 6)
        assert form.a == (a ** 3 + 3 * a ** 2 * t + 3 * a * t ** 2).scale(sixth)
        assert form.b == (-(a ** 3)).scale(sixth)


class TestCurveChi:

    def test_leading_is_top_homogeneous_part(self):
        p, q, d = RationalPoly.symbols("p q d")
        exact = curve_chi_exact(p, q, d)
        assert exact.homogeneous_part(["p", "q"], 3) == curve_chi_leading(p, q, d)
        assert exact.total_degree(["p", "q"]) == 3

    def test_integer_and_fraction_inputs(self):
        assert curve_chi_exact(0, 1, 5) == 0
        assert curve_chi_leading(2, 1, 5) == Fraction(2 * 1 * 3, 2) * 5 - 4 * 5 * 2

    def test_known_values(self):
        assert curve_chi_exact(2, 3, 10) == 6240
        assert curve_chi_leading(1, 1, 11) == 495

    def test_exact_agrees_with_polynomial_form(self):
        p, q, d = RationalPoly.symbols("p q d")
        poly = curve_chi_exact(p, q, d)
        assert poly.evaluate({"p": 3, "q": 2, "d": 9}) == curve_chi_exact(3, 2, 9)
