"""Load-test CLI. Exit code 0 when all thresholds pass, 1 otherwise."""

from __future__ import annotations

import argparse
import sys

from ..errors import SetupError
from .plan import StagePlan, ThresholdSpec
from .report import check_thresholds
from .runner import run_scenario


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="ehrkit-loadtest", description="Staged virtual-user load test.")
    parser.add_argument("--stages", default="60:50,120:50,60:0", help="duration:target stages, comma separated")
    parser.add_argument("--url", required=True, help="target URL (typically the profile endpoint)")
    parser.add_argument("--token", default=None, help="file containing a bearer token")
    parser.add_argument("--think", type=float, default=1.0, help="think time per iteration, seconds")
    parser.add_argument("--p95", type=float, default=500.0, help="p95 threshold in ms")
    parser.add_argument("--max-fail", type=float, default=0.01, help="maximum failure rate")
    parser.add_argument("--out", default=None, help="write the full report as NDJSON")
    args = parser.parse_args(argv)

    token = None
    if args.token:
        with open(args.token, encoding="utf-8") as fh:
            token = fh.read().strip()

    try:
        plan = StagePlan.parse(args.stages, think_time=args.think)
        spec = ThresholdSpec(p95_ms=args.p95, max_failure_rate=args.max_fail)
        report = run_scenario(plan, args.url, token)
    except SetupError as exc:
        print(f"setup error: {exc.detail}", file=sys.stderr)
        return 2

    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(report.to_ndjson() + "\n")

    summary = report.summary()
    for key in ("total_requests", "throughput_rps", "failure_rate", "p50_ms", "p95_ms", "p99_ms", "peak_vus"):
        print(f"{key}: {summary[key]}")

    result = check_thresholds(report, spec)
    if result.passed:
        print("thresholds: pass")
        return 0
    for violation in result.violations:
        print(f"threshold violated: {violation}")
    return 1


if __name__ == "__main__":
    raise SystemExit(main())
