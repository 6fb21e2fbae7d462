"""Pipeline orchestrator."""

from .pipeline import PipelineOrchestrator, PipelineStage, StageResult

__all__ = ["PipelineOrchestrator", "PipelineStage", "StageResult"]
