"""Quantitative weak-localization diagnostics."""

from .diagnostics import (
    DEFAULT_MARGIN_CAP,
    DEFAULT_TAIL_FLOOR,
    LocalizationReport,
    LocalizationVerdict,
    PointwiseCheck,
    RhoEntry,
    SchurMargins,
    TailEntry,
    check_weak_localization,
    localization_report,
    pointwise_localization_check,
    rho,
    schur_margins,
    tail_profile,
)
from .kernels import KernelMatrix, compose_kernels, kernel_matrix
from .weights import Weight, WeightTag, parse_weight

__all__ = [
    "DEFAULT_MARGIN_CAP",
    "DEFAULT_TAIL_FLOOR",
    "KernelMatrix",
    "LocalizationReport",
    "LocalizationVerdict",
    "PointwiseCheck",
    "RhoEntry",
    "SchurMargins",
    "TailEntry",
    "Weight",
    "WeightTag",
    "check_weak_localization",
    "compose_kernels",
    "kernel_matrix",
    "localization_report",
    "parse_weight",
    "pointwise_localization_check",
    "rho",
    "schur_margins",
    "tail_profile",
]
