"""Configuration management for weakloc."""

from typing import Dict, Any, Optional
from pathlib import Path
import os


class Config:
    """
    Process-wide settings shared by the CLI and the experiments.

    Experiment parameters live in pydantic models (see
    ``weakloc.experiments.config``); this class only carries the
    run environment: where output goes, how loud logging is, how many
    threads assembly may use and the default seed.
    """

    VALID_LOG_LEVELS = {"DEBUG", "INFO", "WARNING", "ERROR"}

    def __init__(
        self,
        output_dir: Optional[Path] = None,
        audit_dir: Optional[Path] = None,
        log_level: str = "INFO",
        threads: int = 1,
        seed: int = 0
    ):
        """
        Initialize configuration.

        Args:
            output_dir: Root directory for reports
            audit_dir: Directory for audit logs (defaults to output_dir/audit)
            log_level: Logging level name
            threads: Upper bound on worker threads for assembly
            seed: Default random seed for test-vector sampling
        """
        log_level = log_level.upper()
        if log_level not in self.VALID_LOG_LEVELS:
            raise ValueError(
                f"Invalid log level: {log_level}. Must be one of {sorted(self.VALID_LOG_LEVELS)}"
            )
        if threads < 1:
            raise ValueError(f"Invalid thread count: {threads}. Must be >= 1")
        if seed < 0:
            raise ValueError(f"Invalid seed: {seed}. Must be >= 0")

        self.output_dir = Path(output_dir) if output_dir else Path("./weakloc-out")
        self.audit_dir = Path(audit_dir) if audit_dir else self.output_dir / "audit"
        self.log_level = log_level
        self.threads = int(threads)
        self.seed = int(seed)

    def to_dict(self) -> Dict[str, Any]:
        """
        Convert configuration to dictionary.

        Returns:
            Configuration as dictionary
        """
        return {
            "output_dir": str(self.output_dir),
            "audit_dir": str(self.audit_dir),
            "log_level": self.log_level,
            "threads": self.threads,
            "seed": self.seed
        }

    @classmethod
    def from_env(cls) -> "Config":
        """
        Create configuration from environment variables.

        Environment variables:
            - WEAKLOC_OUTPUT_DIR: Report root directory
            - WEAKLOC_AUDIT_DIR: Audit directory
            - WEAKLOC_LOG_LEVEL: Logging level name
            - WEAKLOC_THREADS: Worker thread bound
            - WEAKLOC_SEED: Default seed

        Returns:
            Config instance
        """
        output_dir = os.getenv("WEAKLOC_OUTPUT_DIR")
        audit_dir = os.getenv("WEAKLOC_AUDIT_DIR")
        try:
            threads = int(os.getenv("WEAKLOC_THREADS", "1"))
            seed = int(os.getenv("WEAKLOC_SEED", "0"))
        except ValueError as exc:
            raise ValueError(f"Invalid integer in environment: {exc}") from exc

        return cls(
            output_dir=Path(output_dir) if output_dir else None,
            audit_dir=Path(audit_dir) if audit_dir else None,
            log_level=os.getenv("WEAKLOC_LOG_LEVEL", "INFO"),
            threads=threads,
            seed=seed
        )
