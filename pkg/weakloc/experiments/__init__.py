"""End-to-end experiments producing validated reports."""

from .anti_wick import run_anti_wick
from .bergman import closed_form_diagonal, run_bergman
from .calderon_toeplitz import run_calderon_toeplitz
from .config import (
    EXPERIMENTS,
    ExperimentConfig,
    config_from_json,
    config_to_json,
    default_config,
    load_config,
)
from .localize import KERNELS, SPACE_EXPERIMENTS, LocalizationRun, run_localization
from .report import ExperimentReport, build_report, report_checker, validate_report

RUNNERS = {
    "anti-wick": run_anti_wick,
    "calderon-toeplitz": run_calderon_toeplitz,
    "bergman": run_bergman,
}

__all__ = [
    "EXPERIMENTS",
    "ExperimentConfig",
    "ExperimentReport",
    "KERNELS",
    "LocalizationRun",
    "RUNNERS",
    "SPACE_EXPERIMENTS",
    "build_report",
    "closed_form_diagonal",
    "config_from_json",
    "config_to_json",
    "default_config",
    "load_config",
    "report_checker",
    "run_anti_wick",
    "run_bergman",
    "run_calderon_toeplitz",
    "run_localization",
    "validate_report",
]
