"""Quasi-orthogonal Z-complementary pair design and ambiguity evaluation."""

from ._qozcp import (
    MetricsReport,
    SolveResult,
    auto_correlation,
    complementary_sum,
    correlations_via_fft,
    cross_correlation,
    golay_pair,
    lambda_j,
    objective,
    papr,
    proj_papr,
    proj_unimodular,
    prouhet_partition_sums,
    ptm,
    reverse_conjugate,
    solve,
    zone_metrics,
)

__all__ = [
    "MetricsReport",
    "SolveResult",
    "auto_correlation",
    "complementary_sum",
    "correlations_via_fft",
    "cross_correlation",
    "golay_pair",
    "lambda_j",
    "objective",
    "papr",
    "proj_papr",
    "proj_unimodular",
    "prouhet_partition_sums",
    "ptm",
    "reverse_conjugate",
    "solve",
    "zone_metrics",
]
