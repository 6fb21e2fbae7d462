"""Runs an experiment's stages through the pipeline orchestrator."""

import logging
from pathlib import Path
from typing import Any, Callable, List, Optional, Tuple

from weakloc.core.parallel import set_threads
from weakloc.core.storage import StorageManager
from weakloc.experiments.config import ExperimentConfig
from weakloc.experiments.report import ExperimentReport, finalize
from weakloc.experiments.stages import (
    RunState,
    bound_sweep,
    build_operator,
    collect_verdicts,
    compactness,
    localize_frame,
    localize_operator,
)
from weakloc.pipelines.orchestrator.pipeline import PipelineOrchestrator

logger = logging.getLogger(__name__)

Stage = Tuple[str, Callable[[RunState], RunState], str]

SHARED_STAGES: List[Stage] = [
    ("localize_frame", localize_frame, "Schur margins, tails and rho of the frame kernel"),
    ("operator", build_operator, "Assemble the multiplier and its norm"),
    ("localize_operator", localize_operator, "Localization and rho of the operator kernel"),
    ("bounds", bound_sweep, "Norm bounds and approximation over the cover sweep"),
    ("compactness", compactness, "Berezin test, singular values and compactness margin"),
]


def run_experiment(
    config: ExperimentConfig,
    setup: Callable[[RunState], RunState],
    extras: Optional[List[Stage]] = None,
    audit_logger: Optional[Any] = None,
    write: bool = True,
    heuristic: bool = False
) -> ExperimentReport:
    """
    Setup, shared stages, experiment extras, verdicts, report.

    Args:
        config: Validated experiment configuration
        setup: Stage building the domain, frame and context
        extras: Experiment-specific stages run after the shared ones
        audit_logger: AuditLogger receiving the pipeline trail
        write: Write report.json and the CSV extracts under config.output_dir
        heuristic: Mark the Berezin verdict as heuristic

    Returns:
        ExperimentReport (with ``paths`` set when written)

    Raises:
        ExperimentError: A stage failed or the report broke an invariant
    """
    set_threads(config.threads)
    pipeline = PipelineOrchestrator(name=config.experiment, audit_logger=audit_logger)
    pipeline.add_stage("setup", setup, "Sample the domain and realize the frame")
    for name, handler, description in SHARED_STAGES + list(extras or []):
        pipeline.add_stage(name, handler, description)
    pipeline.add_stage("verdicts", collect_verdicts, "Collect verdicts")
    pipeline.add_stage("report", finalize, "Build and validate the report")

    state = RunState(
        config=config,
        symbol=config.parsed_symbol(),
        weight=config.parsed_weight(),
        heuristic=heuristic,
    )
    logger.info("running %s with symbol %s", config.experiment, config.symbol)
    result = pipeline.execute(state)
    pipeline.raise_for_status()

    report: ExperimentReport = result["output"]
    if write:
        report.write(StorageManager(Path(config.output_dir)), config.name)
    logger.info(report.summary_line())
    return report
