"""
jetbig command line.

Usage:
    jetbig chern --degree 5
    jetbig chi --tower 3 --weights 2,1
    jetbig chi --tower 4 --weights 6,2,1
    jetbig threshold --tower 3 [--optimize-c]
    jetbig verify [--only chi3,h2chi3] [--format machine] [--skip-slow]
    jetbig ycurve --from 4 --to 7 --step 1/20 --emit csv --output y.csv
    jetbig report --tower 4 --degree 9 --mode exact_region
    jetbig samples --tower 3 --weights 2,1 --n-from 10 --n-to 20 --output chi3.csv

Exit codes: 0 success, 1 verification failure, 2 usage or domain error.

Entrypoint: jetbig.cli:main (registered as `jetbig` in pyproject.toml)
"""
from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
from collections.abc import Callable
from fractions import Fraction
from typing import Literal

from pydantic import field_validator, model_validator

from jetbig.cohomology import LeadingForm, chern_numbers_surface
from jetbig.config import get_settings
from jetbig.lattice import dump_samples_csv
from jetbig.lattice.fitting import sample_sums
from jetbig.log_config import configure_logging
from jetbig.pipelines import x3, x4
from jetbig.pipelines.registry import CHECKS, CheckRow, all_passed, run_checks
from jetbig.pipelines.threshold import (
    polynomial_bound,
    threshold_3,
    threshold_3_optimized,
    threshold_4,
    threshold_find,
    y_rows,
)
from jetbig.ratpoly import format_rational, to_decimal_str
from jetbig.rr import chi_top_term
from jetbig.schemas import FrozenModel

logger = logging.getLogger("jetbig.cli")

Subcommand = Literal["chern", "chi", "threshold", "verify", "ycurve", "report", "samples"]
OutputFormat = Literal["text", "machine", "csv"]

_GRID_COMMANDS = {"ycurve", "samples"}
_TOWER_COMMANDS = {"chi", "threshold", "report", "samples"}


class CommandConfig(FrozenModel):
    subcommand: Subcommand
    tower: int | None = None
    weights: tuple[int, ...] = ()
    degree: int | str | None = None
    c: Fraction | str | None = None
    mode: str = "relaxed_region"
    output_format: OutputFormat = "text"
    output: str | None = None
    optimize_c: bool = False
    d_max: int | None = None
    only: tuple[str, ...] = ()
    skip_slow: bool = False
    inject_wrong: str | None = None
    c_from: Fraction = Fraction(4)
    c_to: Fraction = Fraction(7)
    step: Fraction | None = None
    n_from: int = 10
    n_to: int = 20

    @field_validator("c", mode="before")
    @classmethod
    def _c_value(cls, v: object) -> object:
        if isinstance(v, str) and not v.isidentifier():
            return Fraction(v)
        return v

    @field_validator("mode", mode="before")
    @classmethod
    def _mode_value(cls, v: object) -> object:
        return x3.normalize_mode(v) if isinstance(v, str) else v

    @field_validator("degree", mode="before")
    @classmethod
    def _degree_value(cls, v: object) -> object:
        if isinstance(v, str) and not v.isidentifier():
            return int(v)
        return v

    @model_validator(mode="after")
    def _consistent(self) -> CommandConfig:
        if self.output_format == "csv" and self.subcommand not in _GRID_COMMANDS:
            raise ValueError(f"csv output is only available for {sorted(_GRID_COMMANDS)}")
        if self.subcommand in _GRID_COMMANDS and self.output_format == "machine":
            raise ValueError(f"{self.subcommand} writes csv or text, not machine output")
        if self.subcommand in _TOWER_COMMANDS and self.tower not in (3, 4):
            raise ValueError(f"--tower must be 3 or 4, got {self.tower}")
        if self.c is not None and self.tower == 4:
            raise ValueError("--c only applies to tower 3")
        if self.optimize_c and self.tower != 3:
            raise ValueError("--optimize-c only applies to tower 3")
        if self.subcommand == "chern" and (self.degree is None or isinstance(self.degree, str)):
            raise ValueError("chern needs a numeric --degree")
        if self.subcommand == "ycurve":
            if not Fraction(4) <= self.c_from < self.c_to <= Fraction(7):
                raise ValueError(f"need 4 <= from < to <= 7, got [{self.c_from}, {self.c_to}]")
            if self.step is not None and self.step <= 0:
                raise ValueError(f"--step must be positive, got {self.step}")
        if self.subcommand == "samples" and not 0 <= self.n_from <= self.n_to:
            raise ValueError(f"need 0 <= n-from <= n-to, got [{self.n_from}, {self.n_to}]")
        return self

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> CommandConfig:
        values = {k: v for k, v in vars(args).items() if v is not None and k in cls.model_fields}
        return cls.model_validate(values)


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {text!r}") from None


def _name_list(text: str) -> tuple[str, ...]:
    return tuple(part.strip() for part in text.split(",") if part.strip())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jetbig",
        description="Exact leading terms and bigness thresholds on jet towers of surfaces in P^3.",
    )
    parser.add_argument("--log-level", default=None, help="Override JETBIG_LOG_LEVEL")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_format(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", dest="output_format", choices=["text", "machine", "csv"],
                       default="text", help="Output format (default: text)")

    def add_mode(p: argparse.ArgumentParser) -> None:
        p.add_argument("--mode", choices=[*x3.MODES, *x3.MODE_ALIASES], default="relaxed_region",
                       help="Curve-sum regions: exact sets or the enlarged/shrunk ones")

    p = sub.add_parser("chern", help="Chern numbers of a degree-d surface")
    p.add_argument("--degree", type=_positive_int, required=True)
    add_format(p)

    p = sub.add_parser("chi", help="Leading term of chi for a weighted tautological bundle")
    p.add_argument("--tower", type=int, required=True, choices=[3, 4])
    p.add_argument("--weights", type=_int_list, default=None,
                   help="Multiples of n, right-aligned (e.g. 2,1 or 6,2,1)")
    p.add_argument("--c", default=None, help="Tower 3 only: c = b + 1 (rational or 'c')")
    add_format(p)

    p = sub.add_parser("threshold", help="Least degree with a positive h^0 bound")
    p.add_argument("--tower", type=int, required=True, choices=[3, 4])
    p.add_argument("--optimize-c", action="store_true", default=False,
                   help="Tower 3: let c vary over (4, 7)")
    p.add_argument("--d-max", type=_positive_int, default=None)
    add_mode(p)
    add_format(p)

    p = sub.add_parser("verify", help="Check every published constant")
    p.add_argument("--published-constants", "--paper-constants", dest="published_constants",
                   action="store_true", default=True,
                   help="Run the published-constant suite (default)")
    p.add_argument("--only", type=_name_list, default=None,
                   help=f"Comma-separated groups from: {', '.join(CHECKS)}")
    p.add_argument("--skip-slow", action="store_true", default=False)
    p.add_argument("--inject-wrong", default=None, metavar="NAME",
                   help="Test mode: shift one published constant by 1")
    add_format(p)

    p = sub.add_parser("ycurve", help="Grid of y(c) at d = 11")
    p.add_argument("--from", dest="c_from", type=_rational, default=Fraction(4))
    p.add_argument("--to", dest="c_to", type=_rational, default=Fraction(7))
    p.add_argument("--step", type=_rational, default=None)
    p.add_argument("--emit", dest="output_format", choices=["csv", "text"], default="csv")
    p.add_argument("--output", default=None, help="File path (default: stdout)")

    p = sub.add_parser("report", help="Full h^0 bound report")
    p.add_argument("--tower", type=int, required=True, choices=[3, 4])
    p.add_argument("--degree", default="d", help="Surface degree or 'd'")
    p.add_argument("--c", default=None, help="Tower 3 only: c = b + 1 (rational or 'c')")
    add_mode(p)
    add_format(p)

    p = sub.add_parser("samples", help="Dump exact chi sample sums as csv")
    p.add_argument("--tower", type=int, required=True, choices=[3, 4])
    p.add_argument("--weights", type=_int_list, default=None)
    p.add_argument("--n-from", type=int, default=10)
    p.add_argument("--n-to", type=int, default=20)
    p.add_argument("--output", default=None, help="File path (default: stdout)")
    p.set_defaults(output_format="csv")
    return parser


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def _emit_machine(fields: dict[str, str]) -> None:
    sys.stdout.write("".join(f"{k}={fields[k]}\n" for k in sorted(fields)))


def _tower3_c(config: CommandConfig) -> tuple[Fraction | str, Fraction]:
    """(c, scale): O_3(an, mn) = O_3(bn', n') with n' = mn, so chi scales by m^5."""
    if config.c is not None:
        return config.c, Fraction(1)
    weights = config.weights or (2, 1)
    if len(weights) != 2 or weights[1] < 1:
        raise ValueError(f"tower 3 takes weights a,m with m >= 1, got {weights}")
    a, m = weights
    return Fraction(a, m) + 1, Fraction(m) ** 5


def cmd_chern(config: CommandConfig) -> int:
    chern = chern_numbers_surface(int(config.degree))
    chi_o = (chern.c1sq + chern.c2) / 12
    fields = {
        "degree": str(chern.degree),
        "c1sq": format_rational(chern.c1sq),
        "c2": format_rational(chern.c2),
        "noether": format_rational(chi_o),
    }
    if config.output_format == "machine":
        _emit_machine(fields)
    else:
        print(f"degree  {fields['degree']}")
        print(f"c1sq    {fields['c1sq']}")
        print(f"c2      {fields['c2']}")
        print(f"chi(O_X) = (c1sq + c2)/12 = {fields['noether']}")
    return 0


def cmd_chi(config: CommandConfig) -> int:
    notes: list[str] = []
    if config.tower == 3:
        c, scale = _tower3_c(config)
        form = x3.chi3_leading(c, notes=notes).scale(scale)
        power = 5
    else:
        form = x4.chi4_leading(config.weights or x4.DEFAULT_WEIGHTS, notes=notes)
        power = 6
    if config.output_format == "machine":
        _emit_machine({
            "power": str(power),
            "c1sq": form.a.to_text(),
            "c2": form.b.to_text(),
            **{f"note.{i:02d}": note for i, note in enumerate(notes)},
        })
    else:
        print(f"n^{power} * ({form.to_text()})")
        for note in notes:
            print(f"  [{note}]")
    return 0


def cmd_threshold(config: CommandConfig) -> int:
    witness = None
    if config.tower == 3 and config.optimize_c:
        found, witness = threshold_3_optimized(config.d_max)
    elif config.tower == 3:
        found = threshold_3(config.mode, d_max=config.d_max)
    else:
        found = threshold_4(config.mode, d_max=config.d_max)
    if config.output_format == "machine":
        fields = {
            "tower": str(config.tower),
            "mode": "exact_region" if config.optimize_c else config.mode,
            "threshold": "none" if found is None else str(found),
        }
        if witness is not None:
            fields["witness_c"] = format_rational(witness)
        _emit_machine(fields)
    else:
        print("threshold: none in range" if found is None else f"threshold: d >= {found}")
        if witness is not None:
            print(f"witness c = {format_rational(witness)} (~{to_decimal_str(witness, 4)})")
    return 0


def _print_rows(rows: list[CheckRow]) -> None:
    width = max((len(f"{r.group}/{r.name}") for r in rows), default=10)
    for r in rows:
        label = f"{r.group}/{r.name}"
        print(f"{r.status:<10} {label:<{width}}  expected {r.expected}")
        if r.status != "PASS" or r.expected != r.computed:
            print(f"{'':<10} {'':<{width}}  computed {r.computed}")
    passed = sum(r.status == "PASS" for r in rows)
    print(f"\n{passed}/{len(rows)} passed")


def cmd_verify(config: CommandConfig) -> int:
    rows = run_checks(config.only or None, config.skip_slow, config.inject_wrong)
    if config.output_format == "machine":
        fields: dict[str, str] = {}
        for r in rows:
            key = f"{r.group}.{r.name}".replace(" ", "_")
            fields[f"{key}.status"] = r.status
            fields[f"{key}.expected"] = r.expected
            fields[f"{key}.computed"] = r.computed
        fields["total"] = str(len(rows))
        fields["passed"] = str(sum(r.status == "PASS" for r in rows))
        _emit_machine(fields)
    else:
        _print_rows(rows)
    return 0 if all_passed(rows) else 1


def _write_csv(header: list[str], rows: list[list[str]], output: str | None) -> None:
    if output:
        with open(output, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)
        print(f"Wrote {len(rows)} rows to {output}")
        return
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    sys.stdout.write(buffer.getvalue())


def cmd_ycurve(config: CommandConfig) -> int:
    step = config.step or get_settings().witness_step_value
    rows = y_rows(config.c_from, config.c_to, step, inclusive=True)
    if config.output_format == "csv":
        _write_csv(["c", "y_exact", "y_decimal"],
                   [[format_rational(r.c), format_rational(r.y), to_decimal_str(r.y, 6)]
                    for r in rows],
                   config.output)
    else:
        for r in rows:
            sign = "+" if r.y > 0 else ("-" if r.y < 0 else "0")
            print(f"c={format_rational(r.c):>8}  y={to_decimal_str(r.y, 6):>14}  {sign}")
    positive = [r for r in rows if r.y > 0]
    if not positive:
        logger.warning("ycurve: no positive value on the grid")
    return 0


def cmd_report(config: CommandConfig) -> int:
    degree = config.degree if config.degree is not None else "d"
    threshold = None
    if config.tower == 3:
        c = config.c if config.c is not None else 3
        if isinstance(degree, str) and config.mode == "relaxed_region" and not isinstance(c, str):
            threshold = threshold_find(polynomial_bound(x3.h0_bound_3(degree, c, config.mode)))
        report = x3.build_report_3(degree, c, config.mode, threshold=threshold)
    else:
        if isinstance(degree, str) and config.mode == "relaxed_region":
            threshold = threshold_find(polynomial_bound(x4.h0_bound_4(degree, config.mode)))
        report = x4.build_report_4(degree, config.mode, threshold=threshold)
    if config.output_format == "machine":
        sys.stdout.write(report.to_machine())
    else:
        print(report.to_text())
    return 0


def cmd_samples(config: CommandConfig) -> int:
    if config.tower == 3:
        c, _ = _tower3_c(config)
        if isinstance(c, str):
            raise ValueError("samples needs numeric weights")
        family = x3.chi3_family(c)
        weights = f"c={format_rational(c)}"
    else:
        weights_tuple = tuple(config.weights or x4.DEFAULT_WEIGHTS)
        family = x4.chi4_family(weights_tuple)
        weights = ",".join(str(w) for w in weights_tuple)
    form: LeadingForm = chi_top_term(family.member).summand
    ns = list(range(config.n_from, config.n_to + 1))
    sums = sample_sums(family.region, [form.a, form.b], {}, ns)
    rows = [{"weights": weights, "n": n, "c1sq": sums[n][0], "c2": sums[n][1]} for n in ns]
    if config.output:
        dump_samples_csv(config.output, rows)
        print(f"Wrote {len(rows)} rows to {config.output}")
    else:
        _write_csv(["weights", "n", "c1sq", "c2"],
                   [[r["weights"], str(r["n"]), format_rational(r["c1sq"]),
                     format_rational(r["c2"])] for r in rows],
                   None)
    return 0


COMMANDS: dict[str, Callable[[CommandConfig], int]] = {
    "chern": cmd_chern,
    "chi": cmd_chi,
    "threshold": cmd_threshold,
    "verify": cmd_verify,
    "ycurve": cmd_ycurve,
    "report": cmd_report,
    "samples": cmd_samples,
}


def main(argv: list[str] | None = None) -> None:
    """CLI entrypoint registered as `jetbig` in pyproject.toml."""
    parser = build_parser()
    args = parser.parse_args(argv)
    settings = get_settings()
    configure_logging(settings.log_dir, args.log_level or settings.log_level)

    try:
        config = CommandConfig.from_args(args)
        logger.info(f"running {config.subcommand}")
        code = COMMANDS[config.subcommand](config)
    except SystemExit:
        raise
    except Exception as e:
        exc_type = type(e).__name__
        print(f"ERROR: [{exc_type}] {e}", file=sys.stderr)
        raise SystemExit(2)
    if code:
        raise SystemExit(code)
