"""
Tests for src/jetbig/cli.py

Covers: argument parsing, cross-option validation (CommandConfig), each
subcommand's text and machine output, exit codes, and the ERROR line for
domain errors.
"""
import csv
from fractions import Fraction

import pytest
from pydantic import ValidationError

from jetbig.cli import CommandConfig, build_parser, main


def _run(capsys, *argv: str) -> tuple[int, str, str]:
    """Run main() and return (exit code, stdout, stderr)."""
    try:
        main(list(argv))
        code = 0
    except SystemExit as e:
        code = e.code if isinstance(e.code, int) else 1
    out, err = capsys.readouterr()
    return code, out, err


def _machine(text: str) -> dict[str, str]:
    return dict(line.split("=", 1) for line in text.splitlines() if line)


@pytest.fixture(autouse=True)
def _logs(quiet_logs):
    yield


# ---------------------------------------------------------------------------
# Parsing and validation
# ---------------------------------------------------------------------------

class TestParser:

    def test_subcommand_required(self, capsys):
        code, _, _ = _run(capsys)
        assert code == 2

    def test_chern_degree_must_be_positive(self, capsys):
        code, _, err = _run(capsys, "chern", "--degree", "0")
        assert code == 2
        assert "must be >= 1" in err

    def test_weights_parse(self):
        args = build_parser().parse_args(["chi", "--tower", "4", "--weights", "6,2,1"])
        assert args.weights == (6, 2, 1)

    def test_ycurve_step_is_rational(self):
        args = build_parser().parse_args(["ycurve", "--step", "1/20"])
        assert args.step == Fraction(1, 20)

    def test_older_mode_spelling(self):
        args = build_parser().parse_args(["threshold", "--tower", "3", "--mode", "paper_relaxed"])
        assert args.mode == "paper_relaxed"

    def test_older_constants_flag(self):
        args = build_parser().parse_args(["verify", "--paper-constants"])
        assert args.published_constants


class TestCommandConfig:

    def test_csv_only_for_grids(self):
        with pytest.raises(ValidationError):
            CommandConfig(subcommand="chern", degree=5, output_format="csv")

    def test_c_only_for_tower_three(self):
        with pytest.raises(ValidationError):
            CommandConfig(subcommand="chi", tower=4, c="3")

    def test_optimize_c_only_for_tower_three(self):
        with pytest.raises(ValidationError):
            CommandConfig(subcommand="threshold", tower=4, optimize_c=True)

    def test_ycurve_range(self):
        with pytest.raises(ValidationError):
            CommandConfig(subcommand="ycurve", c_from=Fraction(3), output_format="csv")

    def test_ycurve_step_positive(self):
        with pytest.raises(ValidationError):
            CommandConfig(subcommand="ycurve", step=Fraction(-1), output_format="csv")

    def test_symbolic_and_numeric_c(self):
        assert CommandConfig(subcommand="report", tower=3, c="c").c == "c"
        assert CommandConfig(subcommand="report", tower=3, c="7/2").c == Fraction(7, 2)

    def test_numeric_degree_string(self):
        assert CommandConfig(subcommand="report", tower=3, degree="9").degree == 9
        assert CommandConfig(subcommand="report", tower=3, degree="d").degree == "d"

    def test_mode_alias_normalized(self):
        config = CommandConfig(subcommand="threshold", tower=3, mode="paper_relaxed")
        assert config.mode == "relaxed_region"

    def test_unknown_mode(self):
        with pytest.raises(ValidationError):
            CommandConfig(subcommand="threshold", tower=3, mode="loose")


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

class TestChern:

    def test_machine(self, capsys):
        code, out, _ = _run(capsys, "chern", "--degree", "5", "--format", "machine")
        assert code == 0
        assert out == "c1sq=5\nc2=55\ndegree=5\nnoether=5\n"

    def test_text(self, capsys):
        code, out, _ = _run(capsys, "chern", "--degree", "11")
        assert code == 0
        assert "c1sq    539" in out
        assert "chi(O_X) = (c1sq + c2)/12 = 121" in out


class TestChi:

    def test_tower_three_default(self, capsys):
        code, out, _ = _run(capsys, "chi", "--tower", "3", "--weights", "2,1")
        assert code == 0
        assert out.splitlines()[0] == "n^5 * (83/20*c2 - 1*c1sq)"

    def test_weights_rescale(self, capsys):
        _, out, _ = _run(capsys, "chi", "--tower", "3", "--weights", "4,2", "--format", "machine")
        fields = _machine(out)
        assert fields["power"] == "5"
        assert fields["c1sq"] == "-32"
        assert fields["c2"] == "664/5"

    def test_c_below_three_is_usage_error(self, capsys):
        code, _, err = _run(capsys, "chi", "--tower", "3", "--c", "2")
        assert code == 2
        assert err.startswith("ERROR: [PreconditionError]")

    def test_c_with_tower_four_rejected(self, capsys):
        code, _, err = _run(capsys, "chi", "--tower", "4", "--c", "3")
        assert code == 2
        assert err.startswith("ERROR: [ValidationError]")


class TestVerify:

    def test_ring_machine(self, capsys):
        code, out, _ = _run(capsys, "verify", "--only", "ring", "--format", "machine")
        fields = _machine(out)
        assert code == 0
        assert fields["total"] == fields["passed"]
        assert fields["ring.noether.status"] == "PASS"
        keys = [line.split("=", 1)[0] for line in out.splitlines()]
        assert keys == sorted(keys)

    def test_injected_wrong_constant_exits_one(self, capsys):
        code, out, _ = _run(capsys, "verify", "--only", "assembly",
                            "--inject-wrong", "assembly.c3")
        assert code == 1
        assert "DISCREPANT" in out

    def test_unknown_constant_is_usage_error(self, capsys):
        code, _, err = _run(capsys, "verify", "--only", "ring", "--inject-wrong", "bogus")
        assert code == 2
        assert err.startswith("ERROR: [ValueError]")

    def test_skip_slow(self, capsys):
        code, out, _ = _run(capsys, "verify", "--only", "fd,d9", "--skip-slow")
        assert code == 0
        assert "0/0 passed" in out

    def test_older_constants_flag(self, capsys):
        code, out, _ = _run(capsys, "verify", "--paper-constants", "--only", "ring",
                            "--format", "machine")
        assert code == 0
        assert _machine(out)["ring.noether.status"] == "PASS"


class TestReport:

    def test_machine_report(self, capsys):
        code, out, _ = _run(capsys, "report", "--tower", "3", "--degree", "13",
                            "--format", "machine")
        fields = _machine(out)
        assert code == 0
        assert fields["tower"] == "3"
        assert fields["degree"] == "13"
        assert fields["mode"] == "relaxed_region"
        assert fields["chi.c1sq"] == "-1"

    def test_low_degree_is_usage_error(self, capsys):
        code, _, err = _run(capsys, "report", "--tower", "3", "--degree", "4")
        assert code == 2
        assert "ERROR:" in err


class TestSamples:

    def test_stdout_csv(self, capsys):
        code, out, _ = _run(capsys, "samples", "--tower", "3", "--weights", "2,1",
                            "--n-from", "1", "--n-to", "3")
        rows = list(csv.reader(out.splitlines()))
        assert code == 0
        assert rows[0] == ["weights", "n", "c1sq", "c2"]
        assert [row[1] for row in rows[1:]] == ["1", "2", "3"]
        assert all(row[0] == "c=3" for row in rows[1:])

    def test_file_output(self, capsys, tmp_path):
        path = tmp_path / "chi3.csv"
        code, out, _ = _run(capsys, "samples", "--tower", "3", "--n-from", "2", "--n-to", "4",
                            "--output", str(path))
        assert code == 0
        assert "Wrote 3 rows" in out
        with open(path, newline="") as fh:
            assert len(list(csv.reader(fh))) == 4

    def test_bad_range(self, capsys):
        code, _, _ = _run(capsys, "samples", "--tower", "3", "--n-from", "5", "--n-to", "2")
        assert code == 2


@pytest.mark.slow
class TestSlowCommands:

    def test_threshold_tower_three(self, capsys):
        code, out, _ = _run(capsys, "threshold", "--tower", "3", "--format", "machine")
        assert code == 0
        assert _machine(out)["threshold"] == "12"

    def test_ycurve_csv(self, capsys, tmp_path):
        path = tmp_path / "y.csv"
        code, _, _ = _run(capsys, "ycurve", "--from", "4", "--to", "7", "--step", "1/20",
                          "--output", str(path))
        assert code == 0
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["c", "y_exact", "y_decimal"]
        assert len(rows) == 62
        assert rows[21][:2] == ["5", "981871/88434"]

    def test_threshold_older_mode_spelling(self, capsys):
        code, out, _ = _run(capsys, "threshold", "--tower", "3", "--mode", "paper_relaxed",
                            "--format", "machine")
        fields = _machine(out)
        assert code == 0
        assert fields["mode"] == "relaxed_region"
        assert fields["threshold"] == "12"

    def test_threshold_optimize_c(self, capsys):
        code, out, _ = _run(capsys, "threshold", "--tower", "3", "--optimize-c",
                            "--format", "machine")
        fields = _machine(out)
        assert code == 0
        assert fields["mode"] == "exact_region"
        assert fields["threshold"] == "11"
        assert fields["witness_c"] == "83/20"

    def test_verify_is_deterministic(self, capsys):
        first = _run(capsys, "verify", "--format", "machine")
        second = _run(capsys, "verify", "--format", "machine")
        assert first[0] == second[0]
        assert first[1] == second[1]
