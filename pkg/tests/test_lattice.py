"""
Tests for src/jetbig/lattice/

Covers: region enumeration and bounds, exact sums against brute force,
power sums, dilation vertices and periods, quasi-polynomial fits, exact
polytope volumes, and the auto method choice.
"""
import csv
from fractions import Fraction

import pytest

from jetbig.lattice import (
    Constraint,
    NonAffineConstraintError,
    NonFiniteRegionError,
    Region,
    count_points,
    dilation_vertices,
    dump_samples_csv,
    enumerate_region,
    exact_sum,
    exact_sums,
    fit_closed_form,
    geometric_period,
    integrate_polytope,
    leading_by_volume,
    leading_coefficient,
    leading_coefficients,
)
from jetbig.lattice.fitting import sample_sums
from jetbig.lattice.leading import choose_method
from jetbig.lattice.summation import brute_force_sum, power_sum
from jetbig.ratpoly import RationalPoly


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------

def _staircase() -> Region:
    """0 <= k <= n, 0 <= l <= 3n - 3k."""
    k, l, n = RationalPoly.symbols("k l n")
    return Region(variables=("k", "l"), constraints=(
        Constraint.ge(k), Constraint.ge(n - k),
        Constraint.ge(l), Constraint.ge(3 * n - 3 * k - l),
    ))


def _half_interval() -> Region:
    """0 <= 2k <= n: the point count floor(n/2) + 1 has period 2."""
    k, n = RationalPoly.symbols("k n")
    return Region(variables=("k",), constraints=(Constraint.ge(k), Constraint.ge(n - 2 * k)))


def _simplex(dim: int) -> list[tuple[tuple[int, ...], int]]:
    """x_i >= 0 and sum x_i <= 1 as (coefficients, constant) rows."""
    rows = [(tuple(1 if j == i else 0 for j in range(dim)), 0) for i in range(dim)]
    rows.append((tuple(-1 for _ in range(dim)), 1))
    return rows


# ---------------------------------------------------------------------------
# Regions
# ---------------------------------------------------------------------------

class TestRegion:

    def test_enumerates_in_lex_order(self):
        points = list(enumerate_region(_staircase(), {"n": 1}))
        assert points == [(0, 0), (0, 1), (0, 2), (0, 3), (1, 0)]

    def test_strict_constraints(self):
        k = RationalPoly.var("k")
        region = Region(variables=("k",), constraints=(Constraint.gt(k), Constraint.lt(k, 4)))
        assert list(enumerate_region(region, {})) == [(1,), (2,), (3,)]

    def test_fractional_bounds_round_inward(self):
        k = RationalPoly.var("k")
        region = Region(variables=("k",), constraints=(
            Constraint.ge(2 * k, 1), Constraint.le(3 * k, 10),
        ))
        assert list(enumerate_region(region, {})) == [(1,), (2,), (3,)]

    def test_unbounded_variable(self):
        k = RationalPoly.var("k")
        region = Region(variables=("k",), constraints=(Constraint.ge(k),))
        with pytest.raises(NonFiniteRegionError):
            count_points(region, {})

    def test_non_affine_constraint(self):
        k = RationalPoly.var("k")
        region = Region(variables=("k",), constraints=(Constraint.ge(k), Constraint.ge(4 - k * k)))
        with pytest.raises(NonAffineConstraintError):
            count_points(region, {})

    def test_infeasible_constant_constraint(self):
        region = _staircase().with_constraints(Constraint.ge(-1))
        assert count_points(region, {"n": 3}) == 0
        assert exact_sum(region, 1, {"n": 3}) == 0

    def test_parameters_and_contains(self):
        region = _staircase()
        assert region.parameters() == ("n",)
        assert region.contains((1, 0), {"n": 1})
        assert not region.contains((1, 1), {"n": 1})

    def test_specialize(self):
        region = _staircase().specialize({"n": 2})
        assert region.parameters() == ()
        assert count_points(region, {}) == count_points(_staircase(), {"n": 2})


# ---------------------------------------------------------------------------
# Exact sums
# ---------------------------------------------------------------------------

class TestExactSum:

    @pytest.mark.parametrize("r,upper,expected", [
        (0, 3, 4),
        (1, 10, 55),
        (2, 3, 14),
        (3, 4, 100),
        (1, -1, 0),
        (5, 0, 0),
    ])
    def test_power_sum(self, r, upper, expected):
        assert power_sum(r, upper) == expected

    @pytest.mark.parametrize("n", [0, 1, 4, 9])
    def test_matches_brute_force(self, n):
        summand = RationalPoly.parse("k^2*l - 3/4*l^3 + n*k + 1/5")
        region = _staircase()
        assert exact_sum(region, summand, {"n": n}) == brute_force_sum(region, summand, {"n": n})

    def test_several_summands_one_pass(self):
        region = _staircase()
        summands = [RationalPoly.parse("k"), RationalPoly.parse("l^2"), 1]
        sums = exact_sums(region, summands, {"n": 6})
        assert sums == tuple(brute_force_sum(region, s, {"n": 6}) for s in summands)
        assert sums[2] == count_points(region, {"n": 6})

    def test_extra_parameters(self):
        k, l, c, n = RationalPoly.symbols("k l c n")
        region = Region(variables=("k", "l"), constraints=(
            Constraint.ge(k), Constraint.ge(n - k),
            Constraint.ge(l), Constraint.ge(c * n - 3 * k - l),
        ))
        params = {"n": 5, "c": 4}
        summand = c * k + l
        assert exact_sum(region, summand, params) == brute_force_sum(region, summand, params)

    def test_unassigned_summand_variable(self):
        with pytest.raises(ValueError):
            exact_sum(_staircase(), RationalPoly.parse("d*k"), {"n": 2})


# ---------------------------------------------------------------------------
# Dilation analysis
# ---------------------------------------------------------------------------

class TestDilation:

    def test_staircase_vertices(self):
        vertices = dilation_vertices(_staircase(), {})
        assert vertices == [(0, 0), (0, 3), (1, 0)]
        assert geometric_period(_staircase(), {}) == 1

    def test_half_interval_period(self):
        assert dilation_vertices(_half_interval(), {}) == [(0,), (Fraction(1, 2),)]
        assert geometric_period(_half_interval(), {}) == 2


# ---------------------------------------------------------------------------
# Fitting
# ---------------------------------------------------------------------------

class TestFitClosedForm:

    def test_polynomial_count(self):
        quasi = fit_closed_form(_staircase(), 1, degree_in_n=2)
        assert quasi.period == 1
        assert quasi.leading_coefficient() == Fraction(3, 2)
        assert quasi.evaluate(40) == count_points(_staircase(), {"n": 40})

    def test_quasi_polynomial_count(self):
        quasi = fit_closed_form(_half_interval(), 1, degree_in_n=1)
        assert quasi.period == 2
        assert quasi.leading_coefficient() == Fraction(1, 2)
        for n in (30, 31):
            assert quasi.evaluate(n) == n // 2 + 1

    def test_sample_sums_threaded(self):
        ns = [3, 4, 5, 6]
        serial = sample_sums(_staircase(), ["k"], {}, ns, threads=1)
        threaded = sample_sums(_staircase(), ["k"], {}, ns, threads=3)
        assert serial == threaded
        assert list(threaded) == ns

    def test_dump_samples_csv(self, tmp_path):
        path = tmp_path / "samples.csv"
        rows = [{"c": Fraction(7, 2), "n": 3, "value": Fraction(-5, 6)}]
        assert dump_samples_csv(str(path), rows) == 1
        with open(path, newline="") as fh:
            assert list(csv.reader(fh)) == [["c", "n", "value"], ["7/2", "3", "-5/6"]]

    def test_dump_no_rows(self, tmp_path):
        assert dump_samples_csv(str(tmp_path / "empty.csv"), []) == 0


# ---------------------------------------------------------------------------
# Volumes
# ---------------------------------------------------------------------------

class TestVolume:

    @pytest.mark.parametrize("dim,expected", [(1, 1), (2, Fraction(1, 2)), (3, Fraction(1, 6))])
    def test_simplex_volume(self, dim, expected):
        names = ["x", "y", "z"][:dim]
        assert integrate_polytope(names, _simplex(dim), 1) == expected

    def test_moment(self):
        moment = integrate_polytope(["x", "y"], _simplex(2), RationalPoly.parse("x"))
        assert moment == Fraction(1, 6)

    def test_unbounded(self):
        with pytest.raises(NonFiniteRegionError):
            integrate_polytope(["x"], [((1,), 0)], 1)

    def test_leading_by_volume_matches_fit(self):
        summand = RationalPoly.parse("k*l + n^2")
        fit = fit_closed_form(_staircase(), summand, degree_in_n=4)
        volume = leading_by_volume(_staircase(), summand, 4, {})
        assert volume == fit.leading_coefficient()

    def test_keeps_free_symbols(self):
        summand = RationalPoly.parse("d*k")
        value = leading_by_volume(_staircase(), summand, 3, {})
        assert value.free_variables() == ("d",)

    def test_degree_too_small(self):
        with pytest.raises(ValueError):
            leading_by_volume(_staircase(), RationalPoly.parse("k^3"), 4, {})

    def test_lower_degree_is_zero(self):
        assert leading_by_volume(_staircase(), 1, 5, {}).is_zero()


# ---------------------------------------------------------------------------
# Method choice
# ---------------------------------------------------------------------------

class TestLeadingCoefficients:

    def test_fit_and_volume_agree(self):
        summands = [RationalPoly.parse("k^2 - l"), RationalPoly.parse("n*l")]
        fit = leading_coefficients(_staircase(), summands, 4, method="fit")
        volume = leading_coefficients(_staircase(), summands, 4, method="volume")
        assert fit.values == volume.values
        assert fit.method == "fit" and fit.period == 1
        assert volume.note() == "volume"

    def test_symbolic_summand_uses_volume(self):
        summand = RationalPoly.parse("d*k")
        assert choose_method(_staircase(), [summand], 3, {}) == "volume"
        assert leading_coefficient(_staircase(), summand, 3) == RationalPoly.parse("1/2*d")

    def test_small_region_uses_fit(self):
        assert choose_method(_staircase(), [1], 2, {}) == "fit"

    def test_large_period_uses_volume(self, monkeypatch):
        monkeypatch.setenv("JETBIG_MAX_PERIOD", "1")
        assert choose_method(_half_interval(), [1], 1, {}) == "volume"

    def test_partial_residues_recorded_in_note(self, monkeypatch):
        monkeypatch.setenv("JETBIG_FULL_BRANCH_LIMIT", "1")
        result = leading_coefficients(_half_interval(), [1], 1, method="fit")
        assert result.values == (Fraction(1, 2),)
        assert result.residues == 1
        assert result.note() == "fit period=2, residues 1/2 verified"

    def test_all_residues_leave_note_plain(self):
        result = leading_coefficients(_half_interval(), [1], 1, method="fit")
        assert result.residues == 2
        assert result.note() == "fit period=2"

    def test_sample_budget_uses_volume(self, monkeypatch):
        monkeypatch.setenv("JETBIG_SAMPLE_BUDGET", "1")
        assert choose_method(_staircase(), [1], 2, {}) == "volume"
