"""Pipeline orchestrator for multi-stage experiment runs."""

import logging
import time
import traceback
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any, Callable, Dict, List, Optional

from weakloc.core.errors import ExperimentError

logger = logging.getLogger(__name__)


@dataclass
class PipelineStage:
    """Represents a single stage in a pipeline."""
    name: str
    handler: Callable[[Any], Any]
    description: str = ""
    required: bool = True

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary (exclude handler)."""
        return {
            "name": self.name,
            "description": self.description,
            "required": self.required,
        }


@dataclass
class StageResult:
    """Result of executing a pipeline stage."""
    stage_name: str
    status: str  # "ok", "error"
    output: Any = None
    error: Optional[str] = None
    duration_ms: int = 0
    timestamp: str = ""
    exception: Optional[BaseException] = field(default=None, repr=False)

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary; the stage output and exception are left out."""
        return {
            "stage_name": self.stage_name,
            "status": self.status,
            "error": self.error,
            "duration_ms": self.duration_ms,
            "timestamp": self.timestamp,
        }


class PipelineOrchestrator:
    """
    Runs named stages in order, threading one state object through them.

    A failing required stage stops the run; a failing optional stage is
    recorded and skipped. Stage exceptions are kept on the StageResult so
    callers can re-raise them through ``raise_for_status``.
    """

    def __init__(
        self,
        name: str,
        audit_logger: Optional[Any] = None,
    ):
        """
        Initialize pipeline orchestrator.

        Args:
            name: Pipeline name
            audit_logger: AuditLogger instance (optional)
        """
        self.name = name
        self.audit_logger = audit_logger
        self.stages: List[PipelineStage] = []
        self.stage_results: List[StageResult] = []

    def add_stage(
        self,
        name: str,
        handler: Callable[[Any], Any],
        description: str = "",
        required: bool = True
    ) -> None:
        """
        Add a stage to the pipeline.

        Args:
            name: Stage name
            handler: Called with the current state, returns the next state
            description: Stage description
            required: Whether the pipeline stops when this stage fails
        """
        if any(stage.name == name for stage in self.stages):
            raise ValueError(f"duplicate stage name {name!r}")
        self.stages.append(PipelineStage(name, handler, description, required))

    def _audit(self, **kwargs) -> None:
        if self.audit_logger:
            self.audit_logger.log(actor=self.name, **kwargs)

    def execute(self, initial_data: Any) -> Dict[str, Any]:
        """
        Execute the pipeline.

        Args:
            initial_data: Initial state passed to the first stage

        Returns:
            Dict with pipeline, status ("ok", "partial", "error"), output,
            stages and metadata
        """
        start_time = datetime.now(timezone.utc)
        self.stage_results = []
        current_data = initial_data
        failed_required = False

        self._audit(
            action="pipeline_start",
            object_type="pipeline",
            object_id=self.name,
            result="ok",
            details={"stage_count": len(self.stages)},
        )
        logger.info("pipeline %s: %d stages", self.name, len(self.stages))

        for stage in self.stages:
            result = self._execute_stage(stage, current_data)
            self.stage_results.append(result)
            if result.status == "error":
                if stage.required:
                    failed_required = True
                    break
            else:
                current_data = result.output

        if failed_required:
            status = "error"
        elif any(r.status == "error" for r in self.stage_results):
            status = "partial"
        else:
            status = "ok"

        end_time = datetime.now(timezone.utc)
        metadata = {
            "start_time": start_time.isoformat(),
            "end_time": end_time.isoformat(),
            "duration_ms": int((end_time - start_time).total_seconds() * 1000),
            "total_stages": len(self.stages),
            "successful_stages": sum(1 for r in self.stage_results if r.status == "ok"),
            "failed_stages": sum(1 for r in self.stage_results if r.status == "error"),
        }
        pipeline_result = {
            "pipeline": self.name,
            "status": status,
            "output": current_data,
            "stages": [r.to_dict() for r in self.stage_results],
            "metadata": metadata,
        }

        self._audit(
            action="pipeline_complete",
            object_type="pipeline",
            object_id=self.name,
            result=status,
            details=metadata,
        )
        logger.info("pipeline %s finished: %s", self.name, status)
        return pipeline_result

    def _execute_stage(self, stage: PipelineStage, input_data: Any) -> StageResult:
        start = time.perf_counter()
        timestamp = datetime.now(timezone.utc).isoformat()
        logger.debug("stage %s.%s", self.name, stage.name)
        try:
            output = stage.handler(input_data)
        except Exception as exc:
            duration_ms = int((time.perf_counter() - start) * 1000)
            logger.error("stage %s.%s failed: %s", self.name, stage.name, exc)
            self._audit(
                action="stage_execute",
                object_type="stage",
                object_id=stage.name,
                result="error",
                details={
                    "error": str(exc),
                    "error_type": type(exc).__name__,
                    "duration_ms": duration_ms,
                    "traceback": traceback.format_exc(),
                },
            )
            return StageResult(
                stage_name=stage.name,
                status="error",
                error=str(exc),
                duration_ms=duration_ms,
                timestamp=timestamp,
                exception=exc,
            )

        duration_ms = int((time.perf_counter() - start) * 1000)
        self._audit(
            action="stage_execute",
            object_type="stage",
            object_id=stage.name,
            result="ok",
            details={"duration_ms": duration_ms},
        )
        return StageResult(
            stage_name=stage.name,
            status="ok",
            output=output,
            duration_ms=duration_ms,
            timestamp=timestamp,
        )

    def raise_for_status(self) -> None:
        """Raise ExperimentError, chained to the stage exception, if a required stage failed."""
        for stage, result in zip(self.stages, self.stage_results):
            if result.status == "error" and stage.required:
                raise ExperimentError(
                    f"{self.name}: stage {stage.name!r} failed: {result.error}",
                    stage=stage.name,
                ) from result.exception

    def get_stage_results(self) -> List[StageResult]:
        """Get results of all executed stages."""
        return self.stage_results

    def get_stage_result(self, stage_name: str) -> Optional[StageResult]:
        """Get result of a specific stage by name."""
        for result in self.stage_results:
            if result.stage_name == stage_name:
                return result
        return None
