"""
Tests for src/jetbig/pipelines/threshold.py

Covers: threshold scanning over d, the c grid, the y(c) rows, the witness at
d = 11 and the c-optimized tower-3 threshold.

Anything that fits the quartics in c is marked slow.
"""
from fractions import Fraction

import pytest

from jetbig.pipelines.threshold import (
    c_grid,
    optimize_c_bound,
    polynomial_bound,
    threshold_3,
    threshold_3_optimized,
    threshold_4,
    threshold_find,
    witness_c_d11,
    y_rows,
)
from jetbig.ratpoly import RationalPoly


# ---------------------------------------------------------------------------
# Threshold scanning and the c grid
# ---------------------------------------------------------------------------

class TestThresholdFind:

    def test_linear(self):
        assert threshold_find(lambda d: d - 7, d_max=20) == 8

    def test_run_must_reach_d_max(self):
        values = {d: (1 if d == 6 or d >= 9 else -1) for d in range(5, 21)}
        assert threshold_find(values.__getitem__, d_max=20) == 9

    def test_never_positive(self):
        assert threshold_find(lambda d: -1, d_max=20) is None

    def test_positive_everywhere(self):
        assert threshold_find(lambda d: Fraction(1, d), d_max=20) == 5

    def test_empty_range(self):
        with pytest.raises(ValueError):
            threshold_find(lambda d: 1, d_min=30, d_max=20)

    def test_d_max_from_settings(self, monkeypatch):
        monkeypatch.setenv("JETBIG_D_MAX", "9")
        assert threshold_find(lambda d: d - 8) == 9

    def test_polynomial_bound(self):
        bound = polynomial_bound(RationalPoly.parse("d^2 - 50"))
        assert bound(8) == 14
        assert threshold_find(bound, d_max=30) == 8


class TestCGrid:

    def test_exclusive(self):
        assert c_grid(Fraction(4), Fraction(7), Fraction(1)) == [5, 6]

    def test_inclusive(self):
        assert c_grid(Fraction(4), Fraction(7), Fraction(1), inclusive=True) == [4, 5, 6, 7]

    def test_fractional_step(self):
        grid = c_grid(Fraction(4), Fraction(5), Fraction(1, 4), inclusive=True)
        assert grid == [4, Fraction(17, 4), Fraction(9, 2), Fraction(19, 4), 5]

    def test_bad_step(self):
        with pytest.raises(ValueError):
            c_grid(Fraction(4), Fraction(7), Fraction(0))

    def test_empty_range(self):
        with pytest.raises(ValueError):
            c_grid(Fraction(7), Fraction(4), Fraction(1))


class TestOptimizeCPrecondition:

    @pytest.mark.parametrize("c", [Fraction(4), Fraction(7, 2), Fraction(3)])
    def test_rejects_c_at_or_below_four(self, c):
        with pytest.raises(ValueError, match="c > 4"):
            optimize_c_bound(11, [c])

    def test_rejects_empty_grid(self):
        with pytest.raises(ValueError, match="empty"):
            optimize_c_bound(11, [])


# ---------------------------------------------------------------------------
# Fitted thresholds (slow)
# ---------------------------------------------------------------------------

@pytest.mark.slow
class TestFittedThresholds:

    def test_relaxed_threshold_3(self):
        assert threshold_3("relaxed_region") == 12

    def test_relaxed_threshold_4(self):
        assert threshold_4("relaxed_region") == 10

    def test_witness_at_degree_eleven(self):
        witness = witness_c_d11(Fraction(1, 2))
        assert 4 < witness.c < 7
        assert witness.y > 0

    def test_y_rows_inclusive_grid(self):
        rows = y_rows(Fraction(4), Fraction(7), Fraction(1, 20))
        assert len(rows) == 61
        assert rows[20].c == 5
        assert rows[20].y == Fraction(981871, 88434)

    def test_optimize_c_at_grid_start(self):
        assert optimize_c_bound(11, [Fraction(5)]) == (5, Fraction(981871, 88434))

    def test_optimize_c_keeps_best(self):
        _, value = optimize_c_bound(11, [Fraction(5), Fraction(83, 20)])
        assert value >= Fraction(981871, 88434)

    def test_threshold_3_optimized(self):
        assert threshold_3_optimized() == (11, Fraction(83, 20))
