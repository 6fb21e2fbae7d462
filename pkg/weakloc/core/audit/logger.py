"""Audit trail of commands, pipelines and stages, kept as JSONL."""

import json
from collections import Counter
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional

RESULTS = ("ok", "error", "partial", "negative")


@dataclass
class AuditEntry:
    """One action taken during a run."""
    timestamp: str
    action: str
    actor: str
    object_type: str
    object_id: str
    result: str
    run_label: str
    details: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def to_line(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, ensure_ascii=False, default=str) + "\n"


class AuditLogger:
    """
    Audit trail for a run.

    Entries are timestamped, so the audit file is a log rather than a
    report and sits outside the byte-determinism of report files. Each
    call to ``save`` appends only the entries logged since the last one.
    """

    def __init__(self, audit_dir: Path, run_label: str = "run"):
        """
        Args:
            audit_dir: Directory holding the audit file (created if missing)
            run_label: Command or experiment name stamped on every entry
        """
        self.audit_dir = Path(audit_dir)
        self.audit_dir.mkdir(parents=True, exist_ok=True)
        self.run_label = run_label
        self.entries: List[AuditEntry] = []
        self._saved = 0

    def log(
        self,
        action: str,
        actor: str,
        object_type: str,
        object_id: str,
        result: str,
        details: Optional[Dict[str, Any]] = None,
    ) -> AuditEntry:
        """
        Record an action.

        Args:
            action: e.g. "command_start", "pipeline_start", "stage_execute"
            actor: Pipeline or command name
            object_type: "command", "pipeline", "stage" or "localization"
            object_id: Name of the command, pipeline or stage
            result: One of ``RESULTS``, or a localization verdict
            details: JSON-serializable context

        Returns:
            The new entry
        """
        if not result:
            raise ValueError(f"audit entry {action}/{object_id} needs a result")
        entry = AuditEntry(
            timestamp=datetime.now(timezone.utc).isoformat(),
            action=action,
            actor=actor,
            object_type=object_type,
            object_id=object_id,
            result=result,
            run_label=self.run_label,
            details=dict(details or {}),
        )
        self.entries.append(entry)
        return entry

    def save(self, filename: str = "audit.jsonl") -> Path:
        """Append unsaved entries to ``audit_dir/filename`` and return its path."""
        audit_file = self.audit_dir / filename
        pending = self.entries[self._saved:]
        with audit_file.open("a", encoding="utf-8") as f:
            f.writelines(entry.to_line() for entry in pending)
        self._saved = len(self.entries)
        return audit_file

    def get_entries(
        self,
        action: Optional[str] = None,
        result: Optional[str] = None,
        object_type: Optional[str] = None,
    ) -> List[AuditEntry]:
        """Entries matching every filter given."""
        return [
            e for e in self.entries
            if (action is None or e.action == action)
            and (result is None or e.result == result)
            and (object_type is None or e.object_type == object_type)
        ]

    def counts(self, object_type: str = "stage") -> Dict[str, int]:
        """Number of entries per result for one object type, in ``RESULTS`` order first."""
        tally = Counter(e.result for e in self.entries if e.object_type == object_type)
        known = {r: tally.pop(r) for r in RESULTS if r in tally}
        return {**known, **dict(sorted(tally.items()))}

    @staticmethod
    def load_from_file(audit_file: Path) -> List[AuditEntry]:
        entries = []
        with Path(audit_file).open("r", encoding="utf-8") as f:
            for line in f:
                if line.strip():
                    entries.append(AuditEntry(**json.loads(line)))
        return entries
