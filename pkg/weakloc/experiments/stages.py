"""
Stages shared by the experiment pipelines.

Every stage takes the RunState, fills in its part and returns it. The
experiment modules add a setup stage (domain, frame, dual) in front and
their own extras after.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

from weakloc.core.errors import NotLocalizedError
from weakloc.experiments.config import ExperimentConfig
from weakloc.frames.duals import check_condition
from weakloc.frames.sampled import FrameBounds, SampledFrame, frame_bounds, realization_error
from weakloc.geometry.covers import build_cover
from weakloc.geometry.grids import SampledDomain
from weakloc.localization.diagnostics import (
    LocalizationReport,
    LocalizationVerdict,
    RhoEntry,
    check_weak_localization,
    localization_report,
)
from weakloc.localization.kernels import kernel_matrix
from weakloc.localization.weights import Weight
from weakloc.operators.berezin import BerezinVerdict, berezin_compactness_test, berezin_profile
from weakloc.operators.decomposition import approximant, reconstruction
from weakloc.operators.localized import FrameContext, LocalizedOperator
from weakloc.operators.multipliers import frame_kernel, multiplier
from weakloc.operators.norms import (
    CompactnessMargin,
    SingularValueProxy,
    compactness_margin,
    essential_norm_bound,
    norm_bound,
    operator_norm,
    singular_value_profile,
    singular_value_proxy,
)
from weakloc.operators.symbols import Symbol

logger = logging.getLogger(__name__)


@dataclass
class RunState:
    """Everything an experiment computes, filled in stage by stage."""
    config: ExperimentConfig
    symbol: Symbol
    weight: Weight
    domain: Optional[SampledDomain] = None
    frame: Optional[SampledFrame] = None
    context: Optional[FrameContext] = None
    frame_info: Dict[str, Any] = field(default_factory=dict)
    frame_localization: Optional[LocalizationReport] = None
    frame_verdict: Optional[LocalizationVerdict] = None
    operator: Optional[LocalizedOperator] = None
    norm: float = 0.0
    operator_localization: Optional[LocalizationReport] = None
    operator_verdict: Optional[LocalizationVerdict] = None
    rho_entries: List[RhoEntry] = field(default_factory=list)
    bounds: List[Dict[str, Any]] = field(default_factory=list)
    approximation: List[Dict[str, float]] = field(default_factory=list)
    berezin_verdict: Optional[BerezinVerdict] = None
    berezin_table: Optional[pd.DataFrame] = None
    singular_values: Optional[np.ndarray] = None
    proxy: Optional[SingularValueProxy] = None
    margin: Optional[CompactnessMargin] = None
    heuristic: bool = False
    extras: Dict[str, Any] = field(default_factory=dict)
    verdicts: Dict[str, Any] = field(default_factory=dict)
    extracts: Dict[str, pd.DataFrame] = field(default_factory=dict)
    issues: List[str] = field(default_factory=list)

    def note(self, message: str) -> None:
        """Record a non-fatal condition in the report's issue list."""
        logger.warning(message)
        self.issues.append(message)


def bounds_info(bounds: FrameBounds) -> Dict[str, Any]:
    return {"lower": bounds.lower, "upper": bounds.upper, "resolved_rank": bounds.resolved_rank}


def describe_frame(state: RunState, dual_kind: str, subspace: Optional[np.ndarray] = None) -> None:
    """
    Frame bounds, condition check and realization error of the context's frame.

    The condition c / C is read on ``subspace`` when one is given, else on
    the resolved span.
    """
    frame, config = state.frame, state.config
    bounds = frame_bounds(frame)
    check_condition(frame, config.frame.condition_floor, subspace, bounds.lower, bounds.upper)
    state.frame_info.update({
        "domain": frame.domain.describe(),
        "family": frame.family.describe(),
        "dual": state.context.dual.describe(),
        "dual_kind": dual_kind,
        "bounds": bounds_info(bounds),
        "realization_error": realization_error(frame, n_pairs=200, seed=config.seed),
    })
    logger.info(
        "frame %s: %d nodes, dim %d, bounds [%.6g, %.6g]",
        frame.family.tag.value, len(frame), frame.dim, bounds.lower, bounds.upper,
    )


def localize_frame(state: RunState) -> RunState:
    """Schur margins, tails and rho of the frame's own kernel |<f_x, f_y>|."""
    config = state.config
    report = localization_report(
        kernel_matrix(state.frame), None, state.weight, eps_list=config.sweep.epsilons
    )
    state.frame_localization = report
    state.frame_verdict = check_weak_localization(
        report, config.thresholds.margin_cap, config.thresholds.tail_floor
    )
    if not state.frame_verdict:
        state.note("frame kernel is not weakly localized: " + "; ".join(state.frame_verdict.reasons))
    return state


def build_operator(state: RunState) -> RunState:
    state.operator = multiplier(state.context, state.symbol)
    state.norm = operator_norm(state.operator, state.config.thresholds.dense_svd_threshold)
    logger.info("operator %s: norm %.6g", state.symbol.descriptor, state.norm)
    return state


def localize_operator(state: RunState) -> RunState:
    """
    Localization of the operator kernel |<T f~_x, f_y>|.

    rho is read at the levels eps * ||T||, one per configured eps.
    """
    config = state.config
    epsilons = config.sweep.epsilons
    if state.norm == 0:
        state.rho_entries = [RhoEntry(eps, 0.0, 0.0) for eps in epsilons]
        return state
    levels = [eps * state.norm for eps in epsilons]
    report = localization_report(frame_kernel(state.operator), None, state.weight, eps_list=levels)
    state.operator_localization = report
    state.operator_verdict = check_weak_localization(
        report, config.thresholds.margin_cap, config.thresholds.tail_floor
    )
    state.rho_entries = [
        RhoEntry(eps, entry.R_low, entry.R_high) for eps, entry in zip(epsilons, report.rho_table)
    ]
    return state


def bound_sweep(state: RunState) -> RunState:
    """Norm bound, essential bound and approximation error for every (r, eps)."""
    config, T = state.config, state.operator
    band = config.boundary_band
    rows, approx = [], []
    floor_error = operator_norm(
        T.action - reconstruction(T).action, config.thresholds.dense_svd_threshold
    )
    floor = floor_error / state.norm if state.norm else 0.0
    for r in config.sweep.cover_radii:
        cover = build_cover(state.domain, r)
        for message in cover.warnings:
            state.note(message)
        for entry in state.rho_entries:
            rho_radius = entry.R_high if entry.achieved else float("inf")
            bound = norm_bound(T, cover, entry.eps, rho_radius=rho_radius)
            for message in bound.warnings:
                logger.debug(message)
            rows.append({
                "r": float(r),
                "eps": entry.eps,
                "rho": entry.R_high,
                "r_exceeds_rho": bool(bound.r_exceeds_rho),
                "norm": state.norm,
                "bound": bound.bound,
                "adjoint_bound": bound.adjoint_bound,
                "essential_bound": essential_norm_bound(T, cover, entry.eps, band),
                "overlap_N": bound.overlap_N,
                "diameter_K": bound.diameter_K,
                "ball_measure": bound.ball_measure,
            })
        A = approximant(T, cover)
        error = operator_norm(T.action - A.action, config.thresholds.dense_svd_threshold)
        approx.append({
            "r": float(r),
            "rel_error": error / state.norm if state.norm else 0.0,
            "reconstruction_floor": floor,
        })
        logger.info("cover r=%g: approximation error %.4g", r, approx[-1]["rel_error"])
    state.bounds = rows
    state.approximation = approx
    state.extracts["bounds.csv"] = pd.DataFrame(rows)[["r", "eps", "norm", "bound", "essential_bound"]]
    state.extracts["approximation.csv"] = pd.DataFrame(approx, columns=["r", "rel_error"])
    state.extracts["rho.csv"] = pd.DataFrame(
        [{"eps": e.eps, "R_low": e.R_low, "R_high": e.R_high} for e in state.rho_entries],
        columns=["eps", "R_low", "R_high"],
    )
    return state


def compactness(state: RunState) -> RunState:
    """Berezin boundary test, singular-value proxy and compactness margin."""
    config, T = state.config, state.operator
    band = config.boundary_band
    th = config.thresholds

    try:
        state.berezin_verdict = berezin_compactness_test(
            T,
            band,
            th.berezin_threshold * state.norm,
            localization=(
                state.operator_verdict if state.operator_verdict is not None
                else LocalizationVerdict(True, [])
            ),
            heuristic=state.heuristic,
        )
    except NotLocalizedError as exc:
        state.note(f"Berezin test not applicable: {exc}")
    state.berezin_table = berezin_profile(T)
    state.extracts["berezin_profile.csv"] = state.berezin_table

    count = min(T.dim, 2 * th.k0)
    state.singular_values = singular_value_profile(T, count, th.dense_svd_threshold)
    k0 = th.k0
    if k0 > count:
        state.note(f"k0={k0} exceeds the realization dimension {T.dim}; using k0={count}")
        k0 = count
    state.proxy = singular_value_proxy(state.singular_values, k0, th.singular_value_ratio)
    state.extracts["singular_values.csv"] = pd.DataFrame({
        "k": np.arange(1, len(state.singular_values) + 1),
        "sigma": state.singular_values,
    })
    state.margin = compactness_margin(T, band)
    return state


def _verdict_block(verdict: Optional[LocalizationVerdict], th) -> Optional[Dict[str, Any]]:
    if verdict is None:
        return None
    return {
        "verdict": "localized" if verdict.localized else "not_localized",
        "reasons": list(verdict.reasons),
        "margin_cap": th.margin_cap,
        "tail_floor": th.tail_floor,
    }


def collect_verdicts(state: RunState) -> RunState:
    th = state.config.thresholds
    proxy = state.proxy
    sv_block = {
        "verdict": "compact" if proxy.compact else "not_compact",
        "k0": proxy.k0,
        "sigma_1": proxy.sigma_1,
        "sigma_k0": proxy.sigma_k0,
        "ratio": proxy.ratio,
        "threshold": proxy.threshold,
    }
    berezin_block = None if state.berezin_verdict is None else state.berezin_verdict.to_dict()
    state.verdicts.update({
        "localization": _verdict_block(state.frame_verdict, th),
        "operator_localization": _verdict_block(state.operator_verdict, th),
        "berezin": berezin_block,
        "singular_values": sv_block,
        "compactness": berezin_block["verdict"] if berezin_block else "inconclusive",
        "concordant": None if berezin_block is None else berezin_block["verdict"] == sv_block["verdict"],
        "compactness_margin": {
            "adjoint_max": state.margin.adjoint_max,
            "forward_max": state.margin.forward_max,
            "value": state.margin.value,
            "band": state.margin.band,
        },
    })
    return state
