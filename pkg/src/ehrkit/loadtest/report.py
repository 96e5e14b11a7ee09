"""Load reports, percentile math, and threshold checking.

Every derived statistic is recomputable from the raw samples; the report
stores both so a run can be archived as NDJSON and re-analyzed later.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from ..errors import UndefinedInputError
from .plan import ThresholdSpec


@dataclass(frozen=True)
class Sample:
    start: float
    duration_ms: float
    status: int  # 0 means transport error
    vu: int

    @property
    def ok(self) -> bool:
        return self.status == 200


@dataclass
class LoadReport:
    samples: list[Sample] = field(default_factory=list)
    vu_series: list[tuple[float, int]] = field(default_factory=list)  # (t, active VUs)
    per_vu_iterations: dict[int, int] = field(default_factory=dict)
    started_at: float = 0.0
    finished_at: float = 0.0

    @property
    def total_requests(self) -> int:
        return len(self.samples)

    @property
    def failure_rate(self) -> float:
        if not self.samples:
            return 0.0
        return sum(1 for s in self.samples if not s.ok) / len(self.samples)

    @property
    def durations_ms(self) -> list[float]:
        return [s.duration_ms for s in self.samples]

    @property
    def mean_ms(self) -> float:
        durations = self.durations_ms
        return sum(durations) / len(durations) if durations else math.nan

    @property
    def throughput_rps(self) -> float:
        elapsed = self.finished_at - self.started_at
        return len(self.samples) / elapsed if elapsed > 0 else 0.0

    def percentile_ms(self, q: float) -> float:
        return percentile(self.durations_ms, q)

    def latency_series(self) -> list[tuple[float, float]]:
        """(offset seconds, duration ms) per sample, in start order."""
        return sorted((s.start - self.started_at, s.duration_ms) for s in self.samples)

    def summary(self) -> dict:
        return {
            "total_requests": self.total_requests,
            "throughput_rps": round(self.throughput_rps, 3),
            "failure_rate": self.failure_rate,
            "mean_ms": self.mean_ms,
            "p50_ms": self.percentile_ms(0.50),
            "p95_ms": self.percentile_ms(0.95),
            "p99_ms": self.percentile_ms(0.99),
            "peak_vus": max((n for _, n in self.vu_series), default=0),
            "duration_s": self.finished_at - self.started_at,
        }

    def to_ndjson(self) -> str:
        lines = [json.dumps({"kind": "summary", **self.summary()}, sort_keys=True)]
        lines.extend(
            json.dumps(
                {
                    "kind": "sample",
                    "start": s.start,
                    "duration_ms": s.duration_ms,
                    "status": s.status,
                    "vu": s.vu,
                },
                sort_keys=True,
            )
            for s in self.samples
        )
        lines.extend(
            json.dumps({"kind": "vus", "t": t, "active": n}, sort_keys=True)
            for t, n in self.vu_series
        )
        return "\n".join(lines)


def percentile(samples: list[float], q: float) -> float:
    """Nearest-rank percentile on the sorted sample."""
    if not samples:
        raise UndefinedInputError("percentile of an empty sample")
    if not 0.0 < q < 1.0:
        raise UndefinedInputError(f"q must be in (0, 1), got {q}")
    ordered = sorted(samples)
    rank = math.ceil(q * len(ordered))
    return ordered[max(rank, 1) - 1]


@dataclass(frozen=True)
class ThresholdResult:
    passed: bool
    violations: tuple[str, ...]


def check_thresholds(report: LoadReport, spec: ThresholdSpec) -> ThresholdResult:
    if not report.samples:
        raise UndefinedInputError("report has no samples")
    violations = []
    p95 = report.percentile_ms(0.95)
    if p95 >= spec.p95_ms:
        violations.append(f"p95 {p95:.1f}ms >= {spec.p95_ms:.1f}ms")
    rate = report.failure_rate
    if rate >= spec.max_failure_rate:
        violations.append(f"failure rate {rate:.4f} >= {spec.max_failure_rate:.4f}")
    return ThresholdResult(passed=not violations, violations=tuple(violations))
