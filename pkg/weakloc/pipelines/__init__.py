"""Multi-stage run orchestration."""

from .orchestrator import PipelineOrchestrator, PipelineStage, StageResult

__all__ = ["PipelineOrchestrator", "PipelineStage", "StageResult"]
