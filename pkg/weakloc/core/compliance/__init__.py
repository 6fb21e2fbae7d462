"""Report invariant checks."""

from .checker import (
    BoundValidityRule,
    FiniteNumbersRule,
    NonIncreasingRule,
    ReportChecker,
    ReportRule,
    RequiredFieldRule,
    VerdictConsistencyRule,
)

__all__ = [
    "BoundValidityRule",
    "FiniteNumbersRule",
    "NonIncreasingRule",
    "ReportChecker",
    "ReportRule",
    "RequiredFieldRule",
    "VerdictConsistencyRule",
]
