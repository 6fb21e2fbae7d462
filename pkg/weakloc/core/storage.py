"""Deterministic on-disk storage for reports and extracts."""

import hashlib
import json
from pathlib import Path
from typing import Any, Dict

import pandas as pd


def sha256_file(path: Path) -> str:
    """Hex sha256 of a file, read in 1 MiB chunks."""
    h = hashlib.sha256()
    with Path(path).open("rb") as f:
        for chunk in iter(lambda: f.read(1024 * 1024), b""):
            h.update(chunk)
    return h.hexdigest()


def dumps_json(obj: Any) -> str:
    """Serialize to the canonical report form (sorted keys, 2-space indent)."""
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False, allow_nan=False) + "\n"


class StorageManager:
    """
    Manages report directories under a base directory.

    Everything written here is a pure function of its input: keys are
    sorted, floats are written by ``json``'s repr, and CSVs use ``\\n``
    line endings. No timestamps are added.
    """

    def __init__(self, base_dir: Path):
        """
        Initialize storage manager.

        Args:
            base_dir: Base directory for storage
        """
        self.base_dir = Path(base_dir)
        self.base_dir.mkdir(parents=True, exist_ok=True)

    def run_dir(self, name: str) -> Path:
        """
        Get (and create) the directory for a named run.

        Args:
            name: Run name (experiment or command)

        Returns:
            Path to run directory
        """
        run_dir = self.base_dir / name
        run_dir.mkdir(parents=True, exist_ok=True)
        return run_dir

    def save_json(self, name: str, filename: str, data: Any) -> Path:
        """Save a JSON document under the run directory."""
        path = self.run_dir(name) / filename
        path.write_text(dumps_json(data), encoding="utf-8")
        return path

    def load_json(self, name: str, filename: str) -> Any:
        """Load a JSON document from the run directory."""
        path = self.run_dir(name) / filename
        with path.open("r", encoding="utf-8") as f:
            return json.load(f)

    def save_csv(self, name: str, filename: str, frame: pd.DataFrame) -> Path:
        """Save a CSV extract under the run directory."""
        path = self.run_dir(name) / filename
        frame.to_csv(path, index=False, lineterminator="\n", float_format="%.12g")
        return path

    def save_bytes(self, name: str, filename: str, payload: bytes) -> Path:
        """Save a binary block under the run directory."""
        path = self.run_dir(name) / filename
        path.write_bytes(payload)
        return path

    def artifact_ref(self, path: Path, type_: str, label: str = "") -> Dict[str, Any]:
        """Reference to a written artifact, relative to the base directory."""
        path = Path(path)
        return {
            "type": type_,
            "path": path.relative_to(self.base_dir).as_posix(),
            "sha256": sha256_file(path),
            "label": label,
        }
