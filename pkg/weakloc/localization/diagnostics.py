"""Schur margins, tail profiles, the localization function rho and verdicts."""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from weakloc.core.errors import LocalizationError
from weakloc.frames.sampled import SampledFrame
from weakloc.localization.kernels import KernelMatrix
from weakloc.localization.weights import Weight

logger = logging.getLogger(__name__)

DEFAULT_MARGIN_CAP = 10.0
DEFAULT_TAIL_FLOOR = 0.05


@dataclass
class SchurMargins:
    row: float
    col: float

    def __iter__(self):
        return iter((self.row, self.col))


@dataclass
class TailEntry:
    """Sup tail ratios at radius R; None when no node is interior at R."""
    R: float
    row: Optional[float]
    col: Optional[float]
    interior_fraction: float

    @property
    def available(self) -> bool:
        return self.row is not None

    def worst(self) -> Optional[float]:
        return None if self.row is None else max(self.row, self.col)


@dataclass
class RhoEntry:
    """rho(eps) bracketed by adjacent grid radii; R_high is None if never reached."""
    eps: float
    R_low: float
    R_high: Optional[float]

    @property
    def achieved(self) -> bool:
        return self.R_high is not None


def _weights(K: KernelMatrix, weights: Optional[np.ndarray]) -> np.ndarray:
    w = K.weights if weights is None else np.asarray(weights, dtype=float)
    if w.shape != (K.entries.shape[0],):
        raise LocalizationError(f"{w.shape[0]} weights for a kernel over {K.entries.shape[0]} nodes")
    return w


def schur_margins(K: KernelMatrix, weights: Optional[np.ndarray], p: Weight) -> SchurMargins:
    """
    sup_x (1/p(x)) sum_y w_y K(x, y) p(y) and its transpose.

    Args:
        K: Kernel matrix
        weights: Quadrature weights (None for the domain's)
        p: Weight function

    Returns:
        SchurMargins(row, col)
    """
    w = _weights(K, weights)
    pv = p.eval(K.domain.nodes)
    wp = w * pv
    row = (K.entries @ wp) / pv
    col = (wp @ K.entries) / pv
    return SchurMargins(float(row.max()), float(col.max()))


class _TailEvaluator:
    """Tail ratios at single radii, shared by tail_profile and rho."""

    def __init__(self, K: KernelMatrix, weights: Optional[np.ndarray], p: Weight):
        w = _weights(K, weights)
        self.domain = K.domain
        self.pv = p.eval(K.domain.nodes)
        wp = w * self.pv
        self.row_mass = K.entries * wp[None, :]
        self.col_mass = K.entries * wp[:, None]
        self.dist = K.domain.distances
        self._cache: Dict[float, TailEntry] = {}

    def __call__(self, R: float) -> TailEntry:
        if R not in self._cache:
            interior = self.domain.interior_mask(R)
            frac = float(interior.mean())
            if not interior.any():
                entry = TailEntry(float(R), None, None, frac)
            else:
                idx = np.flatnonzero(interior)
                outside = self.dist[idx] > R + 1e-12
                row = (self.row_mass[idx] * outside).sum(axis=1) / self.pv[idx]
                col = (self.col_mass[:, idx] * outside.T).sum(axis=0) / self.pv[idx]
                entry = TailEntry(float(R), float(row.max()), float(col.max()), frac)
            self._cache[R] = entry
        return self._cache[R]


def default_radii(K: KernelMatrix) -> np.ndarray:
    d = K.domain
    return np.arange(0.0, d.truncation_radius, d.resolution)


def _check_radii(radii: Sequence[float]) -> np.ndarray:
    radii = np.asarray(radii, dtype=float)
    if radii.ndim != 1 or len(radii) == 0:
        raise LocalizationError("radii must be a nonempty list")
    if np.any(np.diff(radii) <= 0):
        raise LocalizationError("radii must be strictly increasing")
    if radii[0] < 0:
        raise LocalizationError("radii must be nonnegative")
    return radii


def tail_profile(
    K: KernelMatrix,
    weights: Optional[np.ndarray],
    p: Weight,
    radii: Optional[Sequence[float]] = None
) -> List[TailEntry]:
    """
    Sup over interior nodes of the weighted kernel mass outside D(x, R).

    A node is interior at R when d(x, e) <= truncation_radius - R. Entries
    with an empty interior are unavailable.
    """
    radii = _check_radii(default_radii(K) if radii is None else radii)
    tails = _TailEvaluator(K, weights, p)
    return [tails(float(R)) for R in radii]


def _rho_from(tails: _TailEvaluator, radii: np.ndarray, eps: float) -> RhoEntry:
    if not eps > 0:
        raise LocalizationError(f"eps must be positive, got {eps}")

    def reached(i: int) -> bool:
        entry = tails(float(radii[i]))
        return entry.available and entry.worst() <= eps

    available = [i for i in range(len(radii)) if tails.domain.interior_mask(radii[i]).any()]
    if not available or not reached(available[-1]):
        last = float(radii[available[-1]]) if available else 0.0
        return RhoEntry(float(eps), last, None)

    lo, hi = 0, available[-1]
    while lo < hi:
        mid = (lo + hi) // 2
        if reached(mid):
            hi = mid
        else:
            lo = mid + 1
    R_high = float(radii[hi])
    R_low = float(radii[hi - 1]) if hi > 0 else R_high
    return RhoEntry(float(eps), R_low, R_high)


def rho(
    K: KernelMatrix,
    weights: Optional[np.ndarray],
    p: Weight,
    eps: float,
    radii: Optional[Sequence[float]] = None
) -> RhoEntry:
    """
    Smallest grid radius at which both sup tail ratios are <= eps.

    Found by bisection over the radius grid, evaluating tails lazily.
    """
    radii = _check_radii(default_radii(K) if radii is None else radii)
    return _rho_from(_TailEvaluator(K, weights, p), radii, eps)


@dataclass
class LocalizationReport:
    schur_row_margin: float
    schur_col_margin: float
    tail_profile: List[TailEntry]
    rho_table: List[RhoEntry]
    weight: Dict[str, object] = field(default_factory=dict)
    kernel: str = ""

    def largest_available_tail(self) -> Optional[TailEntry]:
        available = [t for t in self.tail_profile if t.available]
        return available[-1] if available else None

    def rho_for(self, eps: float) -> RhoEntry:
        for entry in self.rho_table:
            if np.isclose(entry.eps, eps):
                return entry
        raise LocalizationError(f"no rho entry for eps={eps}")

    def to_dict(self) -> Dict[str, object]:
        return {
            "kernel": self.kernel,
            "weight": self.weight,
            "schur_row_margin": self.schur_row_margin,
            "schur_col_margin": self.schur_col_margin,
            "tail_profile": [
                {"R": t.R, "row": t.row, "col": t.col, "interior_fraction": t.interior_fraction}
                for t in self.tail_profile
            ],
            "rho_table": [
                {"eps": r.eps, "R_low": r.R_low, "R_high": r.R_high, "achieved": r.achieved}
                for r in self.rho_table
            ],
        }


def localization_report(
    K: KernelMatrix,
    weights: Optional[np.ndarray],
    p: Weight,
    radii: Optional[Sequence[float]] = None,
    eps_list: Sequence[float] = (0.1,)
) -> LocalizationReport:
    """Schur margins, tail profile and rho table for one kernel."""
    radii = _check_radii(default_radii(K) if radii is None else radii)
    margins = schur_margins(K, weights, p)
    tails = _TailEvaluator(K, weights, p)
    profile = [tails(float(R)) for R in radii]
    rho_table = [_rho_from(tails, radii, float(e)) for e in sorted(eps_list)]
    logger.info(
        "localization of %s: margins (%.4g, %.4g), rho=%s",
        K.label, margins.row, margins.col,
        ", ".join(f"{r.eps:g}->{r.R_high}" for r in rho_table),
    )
    return LocalizationReport(
        schur_row_margin=margins.row,
        schur_col_margin=margins.col,
        tail_profile=profile,
        rho_table=rho_table,
        weight=p.describe(),
        kernel=K.label,
    )


@dataclass
class LocalizationVerdict:
    localized: bool
    reasons: List[str]

    def __bool__(self) -> bool:
        return self.localized


def check_weak_localization(
    report: LocalizationReport,
    margin_cap: float = DEFAULT_MARGIN_CAP,
    tail_floor: float = DEFAULT_TAIL_FLOOR
) -> LocalizationVerdict:
    """True iff both margins are <= margin_cap and the largest-R available tail is <= tail_floor."""
    reasons = []
    if report.schur_row_margin > margin_cap:
        reasons.append(f"row margin {report.schur_row_margin:.4g} exceeds cap {margin_cap:g}")
    if report.schur_col_margin > margin_cap:
        reasons.append(f"column margin {report.schur_col_margin:.4g} exceeds cap {margin_cap:g}")
    last = report.largest_available_tail()
    if last is None:
        reasons.append("no tail entry has a nonempty interior")
    elif last.worst() > tail_floor:
        reasons.append(f"tail {last.worst():.4g} at R={last.R:g} exceeds floor {tail_floor:g}")
    return LocalizationVerdict(not reasons, reasons)


@dataclass
class PointwiseCheck:
    """Largest |<f_x, f_y>| - C exp(-M d(x, y)) over the sampled pairs."""
    M: float
    C: float
    max_violation: float
    worst_pair: Tuple[Tuple[float, float], Tuple[float, float]]
    pairs_checked: int

    @property
    def violated(self) -> bool:
        return self.max_violation > 0

    def to_dict(self) -> Dict[str, object]:
        return {
            "M": self.M,
            "C": self.C,
            "max_violation": self.max_violation,
            "violated": self.violated,
            "worst_pair": [list(self.worst_pair[0]), list(self.worst_pair[1])],
            "pairs_checked": self.pairs_checked,
        }


def pointwise_localization_check(
    F: SampledFrame,
    M: float,
    C: float,
    include_far_pairs: bool = True
) -> PointwiseCheck:
    """
    Sweep of |<f_x, f_y>| - C exp(-M d(x, y)) over node pairs and far pairs.

    Far pairs come from the family and reach scale separations the grid
    does not sample.
    """
    if M <= 0 or C <= 0:
        raise LocalizationError("M and C must be positive")
    domain = F.domain
    nodes = domain.nodes
    excess = np.abs(F.gram) - C * np.exp(-M * domain.distances)
    i, j = np.unravel_index(int(np.argmax(excess)), excess.shape)
    best = float(excess[i, j])
    worst = (tuple(map(float, nodes[i])), tuple(map(float, nodes[j])))
    checked = excess.size

    if include_far_pairs:
        X, Y = F.family.far_pairs()
        for x, y in zip(X, Y):
            x, y = x[None, :], y[None, :]
            value = abs(F.family.pair_inner_matrix(x, y)[0, 0])
            d = domain.space.pairwise_distance(x, y)[0, 0]
            v = float(value - C * np.exp(-M * d))
            checked += 1
            if v > best:
                best = v
                worst = (tuple(map(float, x[0])), tuple(map(float, y[0])))

    logger.info("pointwise check M=%g C=%g: max violation %.3g", M, C, best)
    return PointwiseCheck(float(M), float(C), best, worst, checked)
