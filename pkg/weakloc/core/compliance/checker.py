"""Report invariant rules and the checker that applies them."""

import math
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Sequence


@dataclass
class ReportRule:
    """Represents a rule a report document must satisfy."""
    name: str
    description: str
    severity: str  # "error", "warning", "info"

    def validate(self, data: Any) -> Optional[str]:
        """
        Validate a report against this rule.

        Returns:
            Error message if validation fails, None if passes
        """
        raise NotImplementedError("Subclasses must implement validate()")


class ReportChecker:
    """Validates report documents against a list of rules."""

    def __init__(self, rules: Optional[Sequence[ReportRule]] = None):
        self.rules: List[ReportRule] = list(rules or [])

    def add_rule(self, rule: ReportRule) -> None:
        """Add a rule."""
        self.rules.append(rule)

    def validate(self, data: Any) -> List[Dict[str, str]]:
        """
        Validate data against all rules.

        Args:
            data: Report document (JSON-compatible dict)

        Returns:
            List of issues, each with rule, severity and message
        """
        issues = []
        for rule in self.rules:
            error = rule.validate(data)
            if error:
                issues.append({
                    "rule": rule.name,
                    "severity": rule.severity,
                    "message": error
                })
        return issues

    @staticmethod
    def errors(issues: List[Dict[str, str]]) -> List[Dict[str, str]]:
        """Issues with severity "error"."""
        return [i for i in issues if i["severity"] == "error"]


def _lookup(data: Any, path: str) -> Any:
    node = data
    for part in path.split("."):
        if not isinstance(node, dict) or part not in node:
            return None
        node = node[part]
    return node


class RequiredFieldRule(ReportRule):
    """Rule to check for required top-level sections."""

    def __init__(self, fields: List[str], severity: str = "error"):
        super().__init__(
            name="required_fields",
            description=f"Required fields: {', '.join(fields)}",
            severity=severity
        )
        self.fields = fields

    def validate(self, data: Any) -> Optional[str]:
        if not isinstance(data, dict):
            return "Report must be a dictionary"

        missing = [f for f in self.fields if f not in data]
        if missing:
            return f"Missing required fields: {', '.join(missing)}"
        return None


class FiniteNumbersRule(ReportRule):
    """Every numeric leaf is finite; ``None`` marks an unavailable value."""

    def __init__(self, severity: str = "error"):
        super().__init__(
            name="finite_numbers",
            description="All numeric fields finite",
            severity=severity
        )

    def validate(self, data: Any) -> Optional[str]:
        bad: List[str] = []

        def walk(node: Any, where: str) -> None:
            if isinstance(node, bool) or node is None:
                return
            if isinstance(node, (int, float)):
                if not math.isfinite(node):
                    bad.append(where)
            elif isinstance(node, dict):
                for key, value in node.items():
                    walk(value, f"{where}.{key}" if where else str(key))
            elif isinstance(node, (list, tuple)):
                for i, value in enumerate(node):
                    walk(value, f"{where}[{i}]")

        walk(data, "")
        if bad:
            return f"Non-finite values at: {', '.join(bad[:10])}"
        return None


class NonIncreasingRule(ReportRule):
    """
    A table column is nonincreasing along the table order.

    Row i may exceed row i-1 by ``rel_tol`` relative to row i-1, plus the
    absolute slack stored in row i under ``slack_key`` when one is named.
    """

    def __init__(
        self,
        path: str,
        key: str,
        rel_tol: float = 0.0,
        severity: str = "error",
        slack_key: Optional[str] = None
    ):
        super().__init__(
            name=f"nonincreasing_{path}.{key}",
            description=f"{path}[*].{key} nonincreasing",
            severity=severity
        )
        self.path = path
        self.key = key
        self.rel_tol = rel_tol
        self.slack_key = slack_key

    def validate(self, data: Any) -> Optional[str]:
        rows = _lookup(data, self.path)
        if not rows:
            return None
        rows = [row for row in rows if row.get(self.key) is not None]
        values = [row[self.key] for row in rows]
        for i in range(1, len(values)):
            slack = (rows[i].get(self.slack_key) or 0.0) if self.slack_key else 0.0
            if values[i] > values[i - 1] * (1.0 + self.rel_tol) + slack + 1e-15:
                return (
                    f"{self.path}.{self.key} increases at position {i}: "
                    f"{values[i - 1]:.6g} -> {values[i]:.6g}"
                )
        return None


class BoundValidityRule(ReportRule):
    """Norm bounds dominate the measured norm wherever r exceeds rho."""

    def __init__(self, path: str = "bounds", slack: float = 1e-8, severity: str = "error"):
        super().__init__(
            name="bound_validity",
            description="bound >= norm - slack for rows with r > rho",
            severity=severity
        )
        self.path = path
        self.slack = slack

    def validate(self, data: Any) -> Optional[str]:
        rows = _lookup(data, self.path) or []
        failures = [
            f"(r={row['r']}, eps={row['eps']})"
            for row in rows
            if row.get("r_exceeds_rho") and row["bound"] < row["norm"] - self.slack
        ]
        if failures:
            return f"Bound below operator norm at {', '.join(failures)}"
        return None


class VerdictConsistencyRule(ReportRule):
    """A recorded verdict matches the margin and threshold stored next to it."""

    def __init__(
        self,
        path: str,
        predicate: Callable[[Dict[str, Any]], bool],
        positive: str,
        negative: str,
        severity: str = "error"
    ):
        super().__init__(
            name=f"verdict_{path}",
            description=f"{path} verdict consistent with its margins",
            severity=severity
        )
        self.path = path
        self.predicate = predicate
        self.positive = positive
        self.negative = negative

    def validate(self, data: Any) -> Optional[str]:
        block = _lookup(data, self.path)
        if block is None:
            return None
        expected = self.positive if self.predicate(block) else self.negative
        if block.get("verdict") != expected:
            return f"{self.path}: verdict {block.get('verdict')!r} but margins imply {expected!r}"
        return None
