from .plan import Stage, StagePlan, ThresholdSpec
from .report import LoadReport, Sample, ThresholdResult, check_thresholds, percentile
from .runner import run_scenario

__all__ = [
    "LoadReport",
    "Sample",
    "Stage",
    "StagePlan",
    "ThresholdResult",
    "ThresholdSpec",
    "check_thresholds",
    "percentile",
    "run_scenario",
]
