"""Berezin-transform compactness test for weakly localized operators."""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np
import pandas as pd

from weakloc.core.errors import NotLocalizedError, OperatorError
from weakloc.localization.diagnostics import (
    LocalizationVerdict,
    check_weak_localization,
    localization_report,
)
from weakloc.localization.weights import Weight
from weakloc.operators.localized import LocalizedOperator
from weakloc.operators.multipliers import berezin, frame_kernel

logger = logging.getLogger(__name__)


def berezin_profile(T: LocalizedOperator) -> pd.DataFrame:
    """|B(T)| against the distance to the basepoint, sorted by distance."""
    domain = T.context.domain
    frame = pd.DataFrame({
        "d_to_basepoint": domain.basepoint_distances,
        "abs_berezin": np.abs(berezin(T)),
    })
    return frame.sort_values(["d_to_basepoint", "abs_berezin"], kind="mergesort").reset_index(drop=True)


@dataclass
class BerezinVerdict:
    compact: bool
    boundary_max: float
    threshold: float
    band: float
    heuristic: bool = False
    notes: List[str] = field(default_factory=list)

    @property
    def verdict(self) -> str:
        return "compact" if self.compact else "not_compact"

    @property
    def margin(self) -> float:
        """threshold - boundary max; positive when compact."""
        return self.threshold - self.boundary_max

    def to_dict(self) -> Dict[str, object]:
        return {
            "verdict": self.verdict,
            "boundary_max": self.boundary_max,
            "threshold": self.threshold,
            "band": self.band,
            "margin": self.margin,
            "heuristic": self.heuristic,
            "notes": list(self.notes),
        }


def berezin_compactness_test(
    T: LocalizedOperator,
    boundary_band: float,
    threshold: float,
    localization: Optional[LocalizationVerdict] = None,
    weight: Optional[Weight] = None,
    heuristic: bool = False
) -> BerezinVerdict:
    """
    Compact iff max |B(T)| over the boundary band is <= threshold.

    The criterion only applies to weakly localized operators. Without a
    precomputed ``localization`` verdict, the frame kernel of T is checked
    with ``weight`` (constant by default); a failed check raises
    NotLocalizedError.

    Args:
        T: Operator
        boundary_band: Width of the outer band in the metric
        threshold: Largest boundary |B(T)| still judged compact
        localization: Verdict of check_weak_localization on T's kernel
        weight: Weight for the kernel check when no verdict is given
        heuristic: Mark the verdict as heuristic (no injectivity guarantee)

    Returns:
        BerezinVerdict
    """
    domain = T.context.domain
    if not 0 < boundary_band <= domain.truncation_radius:
        raise OperatorError(f"invalid boundary band {boundary_band}")
    if localization is None:
        report = localization_report(frame_kernel(T), None, weight or Weight.constant())
        localization = check_weak_localization(report)
    if not localization:
        raise NotLocalizedError(localization.reasons)

    band = domain.band_mask(boundary_band)
    if not band.any():
        raise OperatorError(f"no nodes in the boundary band of width {boundary_band:g}")
    boundary_max = float(np.abs(berezin(T))[band].max())
    notes = []
    if heuristic:
        notes.append("injectivity of the Berezin transform is not established for this frame")
    result = BerezinVerdict(
        compact=boundary_max <= threshold,
        boundary_max=boundary_max,
        threshold=float(threshold),
        band=float(boundary_band),
        heuristic=heuristic,
        notes=notes,
    )
    logger.info(
        "Berezin test: boundary max %.4g vs threshold %.4g -> %s%s",
        boundary_max, threshold, result.verdict, " (heuristic)" if heuristic else "",
    )
    return result
