"""Experiment reports: assembly, invariant validation and writing."""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

from weakloc.core.compliance.checker import (
    BoundValidityRule,
    FiniteNumbersRule,
    NonIncreasingRule,
    ReportChecker,
    RequiredFieldRule,
    VerdictConsistencyRule,
)
from weakloc.core.errors import ExperimentError
from weakloc.core.storage import StorageManager
from weakloc.experiments.stages import RunState

logger = logging.getLogger(__name__)

REPORT_FILE = "report.json"

REQUIRED_SECTIONS = [
    "experiment",
    "config",
    "seed",
    "frame",
    "localization",
    "operator",
    "bounds",
    "approximation",
    "berezin_profile",
    "singular_values",
    "verdicts",
    "extras",
    "issues",
]


def to_jsonable(value: Any) -> Any:
    """Convert numpy scalars and arrays (recursively) to plain JSON types."""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, (complex, np.complexfloating)):
        return {"re": float(np.real(value)), "im": float(np.imag(value))}
    return value


def _compact_predicate(block: Dict[str, Any]) -> bool:
    return block["boundary_max"] <= block["threshold"]


def _ratio_predicate(block: Dict[str, Any]) -> bool:
    return block["ratio"] <= block["threshold"]


def _residual_predicate(block: Dict[str, Any]) -> bool:
    return block["max_residual"] <= block["tolerance"]


def report_checker(approximation_rel_tol: float = 0.05) -> ReportChecker:
    """Rules every experiment report must satisfy before it is written."""
    return ReportChecker([
        RequiredFieldRule(REQUIRED_SECTIONS),
        FiniteNumbersRule(),
        NonIncreasingRule("localization.tail_profile", "row"),
        NonIncreasingRule("localization.tail_profile", "col"),
        NonIncreasingRule("localization.rho_table", "R_high"),
        NonIncreasingRule(
            "approximation", "rel_error",
            rel_tol=approximation_rel_tol,
            severity="warning",
            slack_key="reconstruction_floor",
        ),
        BoundValidityRule("bounds"),
        VerdictConsistencyRule("verdicts.berezin", _compact_predicate, "compact", "not_compact"),
        VerdictConsistencyRule("verdicts.singular_values", _ratio_predicate, "compact", "not_compact"),
        VerdictConsistencyRule("verdicts.hankel_identity", _residual_predicate, "pass", "fail"),
    ])


def binned_profile(table: pd.DataFrame, resolution: float) -> List[Dict[str, float]]:
    """Largest |B| per distance bin of width ``resolution``."""
    bins = np.floor(table["d_to_basepoint"].to_numpy() / resolution + 1e-9).astype(int)
    grouped = table.assign(bin=bins).groupby("bin", sort=True)["abs_berezin"].max()
    return [{"d": float(b * resolution), "max_abs_berezin": float(v)} for b, v in grouped.items()]


def build_report(state: RunState) -> Dict[str, Any]:
    """Assemble the JSON report document from a finished RunState."""
    config, T = state.config, state.operator
    operator_block = {
        "symbol": state.symbol.describe(),
        "provenance": T.provenance.to_dict(),
        "dim": T.dim,
        "norm": state.norm,
        "hermitian": T.is_hermitian(),
        "localization": (
            None if state.operator_localization is None else state.operator_localization.to_dict()
        ),
        "rho": [
            {"eps": e.eps, "R_low": e.R_low, "R_high": e.R_high, "achieved": e.achieved}
            for e in state.rho_entries
        ],
    }
    report = {
        "experiment": config.experiment,
        "config": config.report_dict(),
        "seed": config.seed,
        "frame": state.frame_info,
        "localization": state.frame_localization.to_dict(),
        "operator": operator_block,
        "bounds": state.bounds,
        "approximation": state.approximation,
        "berezin_profile": binned_profile(state.berezin_table, state.domain.resolution),
        "singular_values": {
            "k0": state.proxy.k0,
            "values": state.singular_values,
        },
        "verdicts": state.verdicts,
        "extras": state.extras,
        "issues": list(state.issues),
    }
    return to_jsonable(report)


def validate_report(report: Dict[str, Any], checker: Optional[ReportChecker] = None) -> List[Dict[str, str]]:
    """
    Run the report rules.

    Non-error issues are appended to ``report["issues"]``; any error issue
    raises ExperimentError.
    """
    checker = checker or report_checker()
    issues = checker.validate(report)
    errors = ReportChecker.errors(issues)
    if errors:
        summary = "; ".join(f"{i['rule']}: {i['message']}" for i in errors)
        raise ExperimentError(f"report failed validation: {summary}", stage="report")
    for issue in issues:
        report.setdefault("issues", []).append(f"{issue['rule']}: {issue['message']}")
    return issues


@dataclass
class ExperimentReport:
    """A validated report document plus its CSV extracts."""
    document: Dict[str, Any]
    extracts: Dict[str, pd.DataFrame] = field(default_factory=dict)
    paths: Dict[str, Path] = field(default_factory=dict)

    @property
    def experiment(self) -> str:
        return self.document["experiment"]

    @property
    def verdicts(self) -> Dict[str, Any]:
        return self.document["verdicts"]

    @property
    def compactness(self) -> str:
        return self.verdicts["compactness"]

    @property
    def localized(self) -> bool:
        block = self.verdicts.get("localization")
        return block is not None and block["verdict"] == "localized"

    def summary_line(self) -> str:
        sv = self.verdicts["singular_values"]
        symbol = self.document["operator"]["symbol"]["symbol"]
        return (
            f"{self.experiment} symbol={symbol} norm={self.document['operator']['norm']:.6g} "
            f"compactness={self.compactness} sv_ratio={sv['ratio']:.3g} "
            f"localized={'yes' if self.localized else 'no'}"
        )

    def write(self, storage: StorageManager, name: str) -> Dict[str, Path]:
        """Write report.json and every CSV extract under ``storage/name``."""
        self.paths = {"report": storage.save_json(name, REPORT_FILE, self.document)}
        for filename in sorted(self.extracts):
            self.paths[filename] = storage.save_csv(name, filename, self.extracts[filename])
        logger.info("wrote %s report and %d extracts to %s", self.experiment, len(self.extracts),
                    storage.run_dir(name))
        return self.paths


def finalize(state: RunState) -> ExperimentReport:
    """Build, validate and wrap the report of a finished run."""
    document = build_report(state)
    validate_report(document)
    return ExperimentReport(document, dict(state.extracts))
