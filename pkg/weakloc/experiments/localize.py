"""Stand-alone localization diagnostics for one frame."""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict

import numpy as np
import pandas as pd

from weakloc.core.compliance.checker import (
    FiniteNumbersRule,
    NonIncreasingRule,
    ReportChecker,
    RequiredFieldRule,
)
from weakloc.core.errors import ConfigError, ExperimentError
from weakloc.core.parallel import set_threads
from weakloc.core.storage import StorageManager
from weakloc.experiments.anti_wick import setup_gabor
from weakloc.experiments.bergman import setup_bergman
from weakloc.experiments.calderon_toeplitz import setup_haar
from weakloc.experiments.config import ExperimentConfig
from weakloc.experiments.report import to_jsonable
from weakloc.experiments.stages import RunState
from weakloc.localization.diagnostics import (
    LocalizationVerdict,
    check_weak_localization,
    localization_report,
)
from weakloc.localization.kernels import KernelMatrix, kernel_matrix

logger = logging.getLogger(__name__)

SPACE_EXPERIMENTS = {
    "gabor": "anti-wick",
    "haar": "calderon-toeplitz",
    "bergman": "bergman",
}

SETUPS = {
    "anti-wick": setup_gabor,
    "calderon-toeplitz": setup_haar,
    "bergman": setup_bergman,
}

# "constant-one" replaces the frame kernel by K = 1, which is never weakly localized
KERNELS = ("frame", "constant-one")

LOCALIZATION_SECTIONS = ["command", "space", "kernel", "config", "frame", "localization", "verdict"]


@dataclass
class LocalizationRun:
    """Document, verdict and written paths of one ``localize`` run."""
    document: Dict[str, Any]
    verdict: LocalizationVerdict
    extracts: Dict[str, pd.DataFrame] = field(default_factory=dict)
    paths: Dict[str, Path] = field(default_factory=dict)

    @property
    def localized(self) -> bool:
        return self.verdict.localized

    def summary_line(self) -> str:
        loc = self.document["localization"]
        return (
            f"localize space={self.document['space']} kernel={self.document['kernel']} "
            f"row_margin={loc['schur_row_margin']:.6g} col_margin={loc['schur_col_margin']:.6g} "
            f"localized={'yes' if self.localized else 'no'}"
        )


def localization_checker() -> ReportChecker:
    return ReportChecker([
        RequiredFieldRule(LOCALIZATION_SECTIONS),
        FiniteNumbersRule(),
        NonIncreasingRule("localization.tail_profile", "row"),
        NonIncreasingRule("localization.tail_profile", "col"),
        NonIncreasingRule("localization.rho_table", "R_high"),
    ])


def _kernel(state: RunState, kernel: str) -> KernelMatrix:
    if kernel == "frame":
        return kernel_matrix(state.frame)
    return KernelMatrix.from_function(state.domain, np.ones_like, label="constant-one")


def run_localization(
    config: ExperimentConfig,
    kernel: str = "frame",
    write: bool = True
) -> LocalizationRun:
    """
    Realize the experiment's frame and check its kernel for weak localization.

    Args:
        config: Configuration of the experiment owning the space
        kernel: "frame" or the "constant-one" counterexample
        write: Write localization.json and CSV extracts under config.output_dir

    Returns:
        LocalizationRun

    Raises:
        ConfigError: Unknown kernel
        FrameError: The frame cannot be realized
    """
    if kernel not in KERNELS:
        raise ConfigError(f"unknown kernel {kernel!r}; choose one of {list(KERNELS)}")
    set_threads(config.threads)
    state = RunState(config=config, symbol=config.parsed_symbol(), weight=config.parsed_weight())
    SETUPS[config.experiment](state)

    th = config.thresholds
    report = localization_report(
        _kernel(state, kernel), None, state.weight, eps_list=config.sweep.epsilons
    )
    verdict = check_weak_localization(report, th.margin_cap, th.tail_floor)
    space = next(name for name, exp in SPACE_EXPERIMENTS.items() if exp == config.experiment)
    document = to_jsonable({
        "command": "localize",
        "space": space,
        "kernel": kernel,
        "config": config.report_dict(),
        "frame": state.frame_info,
        "localization": report.to_dict(),
        "verdict": {
            "verdict": "localized" if verdict.localized else "not_localized",
            "reasons": list(verdict.reasons),
            "margin_cap": th.margin_cap,
            "tail_floor": th.tail_floor,
        },
    })
    errors = ReportChecker.errors(localization_checker().validate(document))
    if errors:
        summary = "; ".join(f"{i['rule']}: {i['message']}" for i in errors)
        raise ExperimentError(f"localization report failed validation: {summary}", stage="localize")

    tails = pd.DataFrame(document["localization"]["tail_profile"], columns=["R", "row", "col", "interior_fraction"])
    rhos = pd.DataFrame(document["localization"]["rho_table"], columns=["eps", "R_low", "R_high"])
    run = LocalizationRun(document, verdict, {"tail_profile.csv": tails, "rho.csv": rhos})
    if write:
        storage = StorageManager(Path(config.output_dir))
        name = config.run_name or "localize"
        run.paths["report"] = storage.save_json(name, "localization.json", document)
        for filename in sorted(run.extracts):
            run.paths[filename] = storage.save_csv(name, filename, run.extracts[filename])
    logger.info(run.summary_line())
    return run
