"""Operator norms, singular values and the cover-based norm bounds."""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Union

import numpy as np
from scipy import linalg
from scipy.sparse import linalg as sparse_linalg

from weakloc.core.errors import OperatorError
from weakloc.geometry.covers import Cover
from weakloc.geometry.grids import ball_measure_sup
from weakloc.localization.diagnostics import RhoEntry, rho
from weakloc.localization.weights import Weight
from weakloc.operators.localized import LocalizedOperator
from weakloc.operators.multipliers import frame_kernel, local_matrix

logger = logging.getLogger(__name__)

DENSE_SVD_THRESHOLD = 2000
SVD_TOLERANCE = 1e-10

Matrix = Union[LocalizedOperator, np.ndarray]


def _matrix(T: Matrix) -> np.ndarray:
    return T.action if isinstance(T, LocalizedOperator) else np.asarray(T)


def _start_vector(n: int, dtype) -> np.ndarray:
    return np.full(n, 1.0 / np.sqrt(n), dtype=dtype)


def operator_norm(T: Matrix, dense_threshold: int = DENSE_SVD_THRESHOLD) -> float:
    """Largest singular value; dense up to ``dense_threshold``, ARPACK above."""
    A = _matrix(T)
    if not np.any(A):
        return 0.0
    if max(A.shape) <= dense_threshold:
        return float(linalg.svdvals(A)[0])
    s = sparse_linalg.svds(
        A, k=1, tol=SVD_TOLERANCE, v0=_start_vector(A.shape[1], A.dtype), return_singular_vectors=False
    )
    return float(s[0])


def singular_value_profile(
    T: Matrix,
    count: int,
    dense_threshold: int = DENSE_SVD_THRESHOLD
) -> np.ndarray:
    """The ``count`` largest singular values, nonincreasing."""
    A = _matrix(T)
    n = min(A.shape)
    if not 1 <= count <= n:
        raise OperatorError(f"count must lie in [1, {n}], got {count}")
    if max(A.shape) <= dense_threshold or count >= n - 1:
        return linalg.svdvals(A)[:count]
    s = sparse_linalg.svds(
        A, k=count, tol=SVD_TOLERANCE, v0=_start_vector(A.shape[1], A.dtype), return_singular_vectors=False
    )
    return np.sort(s)[::-1]


@dataclass
class SingularValueProxy:
    """Compactness proxy sigma_k0 / sigma_1 <= ratio."""
    k0: int
    sigma_1: float
    sigma_k0: float
    ratio: float
    threshold: float

    @property
    def compact(self) -> bool:
        return self.ratio <= self.threshold


def singular_value_proxy(profile: Sequence[float], k0: int, threshold: float = 0.01) -> SingularValueProxy:
    """Read the proxy off a singular-value profile (k0 is 1-based)."""
    s = np.asarray(profile, dtype=float)
    if not 1 <= k0 <= len(s):
        raise OperatorError(f"k0={k0} outside a profile of length {len(s)}")
    ratio = 0.0 if s[0] == 0 else float(s[k0 - 1] / s[0])
    return SingularValueProxy(int(k0), float(s[0]), float(s[k0 - 1]), ratio, float(threshold))


def operator_rho(
    T: LocalizedOperator,
    weight: Weight,
    eps: float,
    radii: Optional[Sequence[float]] = None,
    norm: Optional[float] = None
) -> RhoEntry:
    """rho of the frame kernel of T at level eps * ||T||."""
    norm = operator_norm(T) if norm is None else norm
    if norm == 0:
        return RhoEntry(float(eps), 0.0, 0.0)
    entry = rho(frame_kernel(T), None, weight, eps * norm, radii=radii)
    return RhoEntry(float(eps), entry.R_low, entry.R_high)


@dataclass
class NormBound:
    """Right-hand side of the cover-based norm estimate and its ingredients."""
    r: float
    eps: float
    bound: float
    adjoint_bound: float
    local_sup: float
    overlap_N: int
    diameter_K: float
    ball_measure: float
    r_exceeds_rho: Optional[bool] = None
    warnings: List[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "eps": self.eps,
            "bound": self.bound,
            "adjoint_bound": self.adjoint_bound,
            "local_sup": self.local_sup,
            "overlap_N": self.overlap_N,
            "diameter_K": self.diameter_K,
            "ball_measure": self.ball_measure,
            "r_exceeds_rho": self.r_exceeds_rho,
        }


def _local_sums(T: LocalizedOperator, cover: Cover) -> np.ndarray:
    """sum over x in D(y, (K+1) r) of w_x |<T f~_x, f_y>|^2, for every y."""
    domain = T.context.domain
    reach = (cover.diameter_K + 1.0) * cover.r
    near = domain.distances <= reach + 1e-12
    M2 = np.abs(local_matrix(T)) ** 2
    return (near * M2) @ domain.weights


def _scale(T: LocalizedOperator, cover: Cover, eps: float):
    if not 0 < eps < 1:
        raise OperatorError(f"eps must lie in (0, 1), got {eps}")
    D = ball_measure_sup(T.context.domain, cover.diameter_K * cover.r)
    return np.sqrt(cover.overlap_N * D) / (1.0 - eps), D


def _rho_check(cover: Cover, rho_radius: Optional[float], warnings: List[str]) -> Optional[bool]:
    if rho_radius is None:
        return None
    ok = cover.r > rho_radius
    if not ok:
        warnings.append(f"r={cover.r:g} does not exceed rho={rho_radius:g}; the bound is not guaranteed")
        logger.warning(warnings[-1])
    return ok


def norm_bound(
    T: LocalizedOperator,
    cover: Cover,
    eps: float,
    rho_radius: Optional[float] = None
) -> NormBound:
    """
    sqrt(N D_Kr) / (1 - eps) * sup_y (sum_{D(y,(K+1)r)} w_x |<T f~_x, f_y>|^2)^(1/2).

    Also returns the simplification that replaces the local sum by
    sqrt(C~) ||T* f_y||, with C~ the upper bound of the dual.

    Args:
        T: Operator
        cover: Cover over the operator's domain
        eps: Localization level in (0, 1)
        rho_radius: rho(eps ||T||) when known; r <= rho is flagged

    Returns:
        NormBound
    """
    warnings: List[str] = []
    scale, D = _scale(T, cover, eps)
    local = float(np.sqrt(_local_sums(T, cover).max()))
    adj = np.linalg.norm(T.action.conj().T @ T.context.frame.vectors, axis=0).max()
    adjoint_side = scale * np.sqrt(T.context.dual.upper_bound) * float(adj)
    result = NormBound(
        r=cover.r,
        eps=float(eps),
        bound=float(scale * local),
        adjoint_bound=float(adjoint_side),
        local_sup=local,
        overlap_N=cover.overlap_N,
        diameter_K=cover.diameter_K,
        ball_measure=float(D),
        r_exceeds_rho=_rho_check(cover, rho_radius, warnings),
        warnings=warnings,
    )
    logger.debug("norm bound r=%g eps=%g: %.6g", cover.r, eps, result.bound)
    return result


def essential_norm_bound(
    T: LocalizedOperator,
    cover: Cover,
    eps: float,
    boundary_band: float
) -> float:
    """The norm bound with the sup over y restricted to the outer band of the truncation."""
    domain = T.context.domain
    if not 0 < boundary_band < domain.truncation_radius:
        raise OperatorError(
            f"boundary band must lie in (0, {domain.truncation_radius:g}), got {boundary_band}"
        )
    band = domain.band_mask(boundary_band)
    if not band.any():
        raise OperatorError(f"no nodes in the boundary band of width {boundary_band:g}")
    scale, _ = _scale(T, cover, eps)
    return float(scale * np.sqrt(_local_sums(T, cover)[band].max()))


@dataclass
class CompactnessMargin:
    """max ||T* f_x|| and max ||T f_x|| over the boundary band."""
    adjoint_max: float
    forward_max: float
    band: float

    @property
    def value(self) -> float:
        return max(self.adjoint_max, self.forward_max)


def compactness_margin(T: LocalizedOperator, boundary_band: float) -> CompactnessMargin:
    domain = T.context.domain
    if not 0 < boundary_band <= domain.truncation_radius:
        raise OperatorError(f"invalid boundary band {boundary_band}")
    band = domain.band_mask(boundary_band)
    if not band.any():
        raise OperatorError(f"no nodes in the boundary band of width {boundary_band:g}")
    F = T.context.frame.vectors[:, band]
    return CompactnessMargin(
        adjoint_max=float(np.linalg.norm(T.action.conj().T @ F, axis=0).max()),
        forward_max=float(np.linalg.norm(T.action @ F, axis=0).max()),
        band=float(boundary_band),
    )
