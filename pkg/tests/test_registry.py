"""
Tests for src/jetbig/pipelines/registry.py

Covers: row status semantics (PASS / FAIL / DISCREPANT), injection of a wrong
published constant, group selection, and the full published-constant suite.
Groups that fit over symbolic c or integrate the X_4 regions are marked slow.
"""
from fractions import Fraction

import pytest

from jetbig.cohomology import LeadingForm
from jetbig.lattice import Constraint, Region
from jetbig.pipelines import registry
from jetbig.pipelines.registry import (
    CHECKS,
    PUBLISHED,
    SLOW_GROUPS,
    _fit_vs_volume,
    _row,
    all_passed,
    published_constants,
    run_checks,
)
from jetbig.pipelines.threshold import NoWitnessError
from jetbig.ratpoly import RationalPoly


# ---------------------------------------------------------------------------
# Row semantics
# ---------------------------------------------------------------------------

class TestRowStatus:

    def test_match_passes(self):
        row = _row("g", "x", Fraction(1, 2), Fraction(1, 2))
        assert row.status == "PASS"
        assert row.expected == row.computed == "1/2"

    def test_published_mismatch_is_discrepant(self):
        row = _row("g", "x", 12, 11)
        assert row.status == "DISCREPANT"
        assert (row.expected, row.computed) == ("12", "11")

    def test_internal_mismatch_fails(self):
        row = _row("g", "x", 1, 2, published=False)
        assert row.status == "FAIL"

    def test_forms_render_as_text(self):
        form = LeadingForm(a=-1, b=Fraction(249, 60))
        row = _row("g", "x", form, form)
        assert row.expected == "83/20*c2 - 1*c1sq"

    def test_all_passed(self):
        rows = [_row("g", "x", 1, 1), _row("g", "y", 2, 2)]
        assert all_passed(rows)
        assert not all_passed(rows + [_row("g", "z", 1, 2)])


# ---------------------------------------------------------------------------
# Published constants
# ---------------------------------------------------------------------------

class TestPublishedConstants:

    def test_unchanged_by_default(self):
        assert published_constants() == PUBLISHED

    @pytest.mark.parametrize("name,expected", [
        ("threshold3.threshold", Fraction(13)),
        ("ycurve.y5", Fraction(981871, 88434) + 1),
        ("chi3.c3", LeadingForm(a=0, b=Fraction(249, 60))),
    ])
    def test_inject_wrong_shifts_by_one(self, name, expected):
        assert published_constants(name)[name] == expected

    def test_inject_wrong_polynomial(self):
        shifted = published_constants("h2chi3.f1")["h2chi3.f1"]
        assert shifted - PUBLISHED["h2chi3.f1"] == RationalPoly.const(1)

    def test_inject_does_not_touch_registry(self):
        published_constants("fd.threshold")
        assert PUBLISHED["fd.threshold"] == 10

    def test_unknown_name(self):
        with pytest.raises(ValueError, match="unknown published constant"):
            published_constants("no.such.constant")

    def test_assembly_chain_is_consistent(self):
        assert PUBLISHED["chi3.c3"] + PUBLISHED["h2chi3.c3"] == PUBLISHED["assembly.c3"]


# ---------------------------------------------------------------------------
# Running checks
# ---------------------------------------------------------------------------

class TestRunChecks:

    def test_unknown_group(self):
        with pytest.raises(ValueError, match="unknown check group"):
            run_checks(["ring", "nope"])

    def test_ring_group(self):
        rows = run_checks(["ring"])
        assert rows and all(row.group == "ring" for row in rows)
        assert all_passed(rows)

    def test_skip_slow(self):
        rows = run_checks(sorted(SLOW_GROUPS), skip_slow=True)
        assert rows == []

    def test_injected_constant_is_discrepant(self):
        rows = run_checks(["assembly"], inject_wrong="assembly.c3")
        assert {row.status for row in rows} == {"DISCREPANT"}
        assert not all_passed(rows)

    def test_assembly_group(self):
        assert all_passed(run_checks(["assembly"]))

    def test_missing_witness_is_a_failed_row(self, monkeypatch):
        def no_witness(*args, **kwargs):
            raise NoWitnessError("no c in the grid gives a positive bound")

        monkeypatch.setattr(registry, "witness_c_d11", no_witness)
        monkeypatch.setattr(registry, "y_curve", lambda: RationalPoly.parse("-(c-5)^2 - 1"))
        rows = {row.name: row for row in run_checks(["ycurve"])}
        assert rows["witness"].status == "FAIL"
        assert rows["witness"].computed == "max y = -1 at c=5"
        assert not all_passed(rows.values())


# ---------------------------------------------------------------------------
# Sampled fit against the polytope volume
# ---------------------------------------------------------------------------

def _half_interval() -> Region:
    """0 <= 2k <= n, period 2."""
    k, n = RationalPoly.symbols("k n")
    return Region(variables=("k",), constraints=(Constraint.ge(k), Constraint.ge(n - 2 * k)))


class TestFitVsVolume:

    def test_agreeing_methods_pass(self):
        rows = _fit_vs_volume("oracle", "half", _half_interval(), [RationalPoly.const(1)], 1)
        assert len(rows) == 1
        assert rows[0].name == "half fit=volume"
        assert rows[0].status == "PASS"
        assert rows[0].computed == "1/2"

    def test_skipped_above_max_period(self, monkeypatch):
        monkeypatch.setenv("JETBIG_MAX_PERIOD", "1")
        assert _fit_vs_volume("oracle", "half", _half_interval(),
                              [RationalPoly.const(1)], 1) == []


FAST_GROUPS = ["ring", "assembly"]
FIT_GROUPS = [g for g in CHECKS if g not in SLOW_GROUPS and g not in FAST_GROUPS]


@pytest.mark.slow
@pytest.mark.parametrize("group", FIT_GROUPS)
def test_published_group_passes(group):
    rows = run_checks([group])
    failing = [row for row in rows if row.status != "PASS"]
    assert not failing, failing


@pytest.mark.slow
@pytest.mark.parametrize("group", sorted(SLOW_GROUPS))
def test_x4_group_passes(group):
    rows = run_checks([group])
    failing = [row for row in rows if row.status != "PASS"]
    assert not failing, failing
