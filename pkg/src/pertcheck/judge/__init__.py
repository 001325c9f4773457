"""Human judgments, the deviation score and correlation statistics."""

from .deviation import CoverageGap, DeviationRecord, aggregate_deviation, check_penalties
from .human import (
    H_ORIGINAL, HumanQuality, PenaltyTable, align, deviation, format_penalties, human_quality,
    load_criteria_scores, load_penalties, parse_penalties,
)
from .stats import (
    CorrelationMatrix, bucket, correlate, criteria_matrix, iaa_runs, iaa_split, kendall_tau_b,
    metric_criteria_corr, pearson, tau_b_counts,
)

__all__ = [
    "H_ORIGINAL", "CorrelationMatrix", "CoverageGap", "DeviationRecord", "HumanQuality",
    "PenaltyTable", "aggregate_deviation", "align", "bucket", "check_penalties", "correlate",
    "criteria_matrix", "deviation", "format_penalties", "human_quality", "iaa_runs", "iaa_split",
    "kendall_tau_b", "load_criteria_scores", "load_penalties", "metric_criteria_corr",
    "parse_penalties", "pearson", "tau_b_counts",
]
