"""Anti-Wick operators: Gaussian Gabor frame on the time-frequency plane."""

import logging
from typing import Any, Optional

from weakloc.core.errors import ConfigError
from weakloc.experiments.config import ExperimentConfig
from weakloc.experiments.report import ExperimentReport
from weakloc.experiments.runner import run_experiment
from weakloc.experiments.stages import RunState, bounds_info, describe_frame
from weakloc.frames.duals import parseval_dual
from weakloc.frames.sampled import frame_bounds, gabor_gaussian_frame, gabor_interior_subspace
from weakloc.geometry.grids import sample_grid
from weakloc.geometry.spaces import SpaceTag
from weakloc.operators.localized import FrameContext

logger = logging.getLogger(__name__)


def setup_gabor(state: RunState) -> RunState:
    config = state.config
    state.domain = sample_grid(SpaceTag.EUCLIDEAN_2D, config.grid.resolution, config.grid.truncation)
    state.frame = gabor_gaussian_frame(
        state.domain, config.frame.time_step, config.frame.window_halfwidth
    )
    subspace = gabor_interior_subspace(state.frame)
    dual = parseval_dual(state.frame, subspace, tolerance=config.frame.parseval_tolerance)
    state.context = FrameContext(state.frame, dual)
    describe_frame(state, "parseval", subspace)
    interior = frame_bounds(state.frame, subspace)
    state.frame_info["interior_bounds"] = bounds_info(interior)
    logger.info("interior frame bounds [%.6g, %.6g]", interior.lower, interior.upper)
    return state


def run_anti_wick(
    config: ExperimentConfig,
    audit_logger: Optional[Any] = None,
    write: bool = True
) -> ExperimentReport:
    """
    Frame, localization, T_sigma, bounds, Berezin test and verdicts on the plane.

    Args:
        config: An anti-wick configuration
        audit_logger: Optional AuditLogger
        write: Write the report bundle under config.output_dir

    Returns:
        ExperimentReport
    """
    if config.experiment != "anti-wick":
        raise ConfigError(f"run_anti_wick needs an anti-wick config, got {config.experiment}")
    return run_experiment(config, setup_gabor, audit_logger=audit_logger, write=write)
