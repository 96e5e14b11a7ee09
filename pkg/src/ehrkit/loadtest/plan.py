"""Staged load plans and pass/fail thresholds."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import SetupError


@dataclass(frozen=True)
class Stage:
    duration: float  # seconds
    target_vus: int


@dataclass
class StagePlan:
    stages: list[Stage] = field(default_factory=list)
    think_time: float = 1.0  # seconds per iteration

    def __post_init__(self):
        if not self.stages:
            raise SetupError("plan has no stages")
        for stage in self.stages:
            if stage.duration <= 0:
                raise SetupError("stage durations must be positive")
            if stage.target_vus < 0:
                raise SetupError("stage targets must be nonnegative")

    @property
    def total_duration(self) -> float:
        return sum(s.duration for s in self.stages)

    def target_at(self, t: float) -> float:
        """Linear interpolation within each stage, starting from 0 VUs."""
        if t < 0:
            return 0.0
        start_target = 0.0
        elapsed = 0.0
        for stage in self.stages:
            if t <= elapsed + stage.duration:
                fraction = (t - elapsed) / stage.duration
                return start_target + (stage.target_vus - start_target) * fraction
            start_target = float(stage.target_vus)
            elapsed += stage.duration
        return float(self.stages[-1].target_vus)

    @staticmethod
    def parse(spec: str, think_time: float = 1.0) -> "StagePlan":
        """Parses "60:50,120:50,60:0" as duration:target stages."""
        stages = []
        for part in spec.split(","):
            duration, _, target = part.partition(":")
            try:
                stages.append(Stage(float(duration), int(target)))
            except ValueError:
                raise SetupError(f"bad stage spec {part!r}") from None
        return StagePlan(stages=stages, think_time=think_time)


@dataclass(frozen=True)
class ThresholdSpec:
    p95_ms: float
    max_failure_rate: float

    def __post_init__(self):
        if self.p95_ms <= 0:
            raise SetupError("p95_ms must be positive")
        if not 0.0 <= self.max_failure_rate <= 1.0:
            raise SetupError("max_failure_rate must be in [0, 1]")
