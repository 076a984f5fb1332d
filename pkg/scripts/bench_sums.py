#!/usr/bin/env python
"""
Timing harness for exact lattice sums and leading-coefficient recovery.

Runs exact_sums on the X_3 and X_4 chi families over a range of n, then
times leading_coefficients with each method, and prints a summary table.

Usage:
    uv run python scripts/bench_sums.py [--n-max N] [--threads T] [--skip-x4]
"""
import argparse
import sys
import time
from fractions import Fraction
from pathlib import Path

# Ensure src/ is on the path when run via uv run python
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from dotenv import load_dotenv
load_dotenv()

from jetbig.lattice import count_points, exact_sums, leading_coefficients
from jetbig.lattice.fitting import sample_sums
from jetbig.pipelines import x3, x4
from jetbig.ratpoly import format_rational
from jetbig.rr import chi_top_term


def _families(skip_x4: bool) -> list[tuple[str, object, int]]:
    cases = [("chi3 c=3", x3.chi3_family(Fraction(3)), x3.DEGREE_IN_N)]
    if not skip_x4:
        cases.append(("chi4 (6,2,1)", x4.chi4_family(x4.DEFAULT_WEIGHTS), x4.DEGREE_IN_N))
    return cases


def run_benchmark(n_max: int = 24, threads: int = 1, skip_x4: bool = False) -> None:
    results = []
    for label, family, degree_in_n in _families(skip_x4):
        form = chi_top_term(family.member).summand
        summands = [form.a, form.b]
        print(f"{label}: region over {', '.join(family.region.variables)}")
        print("-" * 72)

        start = time.time()
        points = count_points(family.region, {"n": n_max})
        exact_sums(family.region, summands, {"n": n_max})
        single = time.time() - start
        print(f"  one sample at n={n_max}: {points} points in {single:.3f}s")

        start = time.time()
        sample_sums(family.region, summands, {}, list(range(1, n_max + 1)), threads=threads)
        sweep = time.time() - start
        print(f"  n=1..{n_max} with {threads} thread(s): {sweep:.2f}s")

        row = {"family": label, "points": points, "single_s": single, "sweep_s": sweep}
        for method in ("fit", "volume"):
            start = time.time()
            try:
                result = leading_coefficients(family.region, summands, degree_in_n, method=method)
                elapsed = time.time() - start
                a, b = (format_rational(v.constant_term()) for v in result.values)
                print(f"  {method:<6} {elapsed:8.2f}s  a={a} b={b}  [{result.note()}]")
                row[method] = round(elapsed, 2)
            except Exception as e:
                elapsed = time.time() - start
                print(f"  {method:<6} ERROR in {elapsed:.2f}s: {e}")
                row[method] = None
        results.append(row)
        print()

    print("=" * 72)
    print(f"BENCHMARK SUMMARY ({len(results)} families)")
    for row in results:
        fit = "err" if row.get("fit") is None else f"{row['fit']}s"
        volume = "err" if row.get("volume") is None else f"{row['volume']}s"
        print(f"  {row['family']:<14} sweep {row['sweep_s']:.2f}s  fit {fit}  volume {volume}")


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description="Time exact sums and leading-term recovery")
    parser.add_argument("--n-max", type=int, default=24, help="Largest n to sample (default: 24)")
    parser.add_argument("--threads", type=int, default=1, help="Worker threads (default: 1)")
    parser.add_argument("--skip-x4", action="store_true", help="Only time the X_3 family")
    args = parser.parse_args()
    run_benchmark(n_max=args.n_max, threads=args.threads, skip_x4=args.skip_x4)
