"""Dual frames: canonical, Parseval identification and tight."""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import linalg

from weakloc.core.errors import DegenerateFrameError, FrameError, IllConditionedFrameError
from weakloc.frames.sampled import (
    DEFAULT_RANK_CUTOFF,
    SampledFrame,
    analysis,
    frame_bounds,
    frame_operator,
)

logger = logging.getLogger(__name__)

DEFAULT_CONDITION_FLOOR = 1e-8


@dataclass
class DualFrame:
    """
    Dual vectors f~_x for a sampled frame.

    ``upper_bound`` is the upper frame bound of the dual family on the
    discrete grid; the adjoint-side norm bound scales by its square root.
    """
    base: SampledFrame
    vectors: np.ndarray
    kind: str
    upper_bound: float
    note: str = ""

    def describe(self) -> dict:
        return {"kind": self.kind, "upper_bound": self.upper_bound, "note": self.note}


def check_condition(
    frame: SampledFrame,
    condition_floor: float,
    subspace: Optional[np.ndarray] = None,
    lower: Optional[float] = None,
    upper: Optional[float] = None
) -> None:
    """Raise IllConditionedFrameError when c / C falls below ``condition_floor``."""
    if subspace is not None:
        lower, upper = frame_bounds(frame, subspace, rank_cutoff=0.0)
    elif lower is None or upper is None:
        lower, upper = frame_bounds(frame)
    if lower / upper < condition_floor:
        raise IllConditionedFrameError(lower, upper, condition_floor)


def canonical_dual(
    frame: SampledFrame,
    rank_cutoff: float = DEFAULT_RANK_CUTOFF,
    condition_floor: float = DEFAULT_CONDITION_FLOOR,
    subspace: Optional[np.ndarray] = None
) -> DualFrame:
    """
    f~_x = S^+ f_x with S^+ the spectrally regularized inverse of S.

    Eigenvalues below ``rank_cutoff * C`` are dropped. Raises
    IllConditionedFrameError when c / C is below ``condition_floor``.
    With a ``subspace`` (orthonormal columns), c and C are the extreme
    eigenvalues of the compression of S to it, none dropped; without one
    they are taken on the resolved span, where only a floor above
    ``rank_cutoff`` can fail.
    """
    lam, V = linalg.eigh(frame_operator(frame))
    upper = float(lam[-1])
    if upper <= 0:
        raise DegenerateFrameError("frame operator vanishes (C = 0)")
    keep = lam > rank_cutoff * upper
    lower = float(lam[keep][0])
    check_condition(frame, condition_floor, subspace, lower, upper)

    Vr = V[:, keep]
    S_pinv = (Vr / lam[keep][None, :]) @ Vr.conj().T
    vectors = S_pinv @ frame.vectors
    vectors.setflags(write=False)
    logger.info(
        "canonical dual: resolved rank %d of %d, c=%.6g C=%.6g",
        int(keep.sum()), frame.dim, lower, upper
    )
    return DualFrame(
        base=frame,
        vectors=vectors,
        kind="canonical",
        upper_bound=1.0 / lower,
        note=f"S^+ with eigenvalues below {rank_cutoff:g} C dropped",
    )


def parseval_dual(
    frame: SampledFrame,
    subspace: Optional[np.ndarray] = None,
    tolerance: Optional[float] = None
) -> DualFrame:
    """
    Identify the dual with the frame itself (continuum frame is Parseval).

    With a ``tolerance``, the discrete frame bounds on ``subspace`` (the
    resolved span when None) must lie within it of 1; otherwise S is too
    far from the identity for f~_x = f_x and FrameError is raised.
    """
    bounds = frame_bounds(frame)
    if tolerance is not None:
        test = bounds if subspace is None else frame_bounds(frame, subspace)
        deviation = max(1.0 - test.lower, test.upper - 1.0)
        if deviation > tolerance:
            raise FrameError(
                f"sampled frame is not near-Parseval: bounds [{test.lower:.6g}, {test.upper:.6g}] "
                f"deviate from 1 by {deviation:.4g} > {tolerance:g}; refine the grid"
            )
    return DualFrame(
        base=frame,
        vectors=frame.vectors,
        kind="parseval",
        upper_bound=bounds.upper,
        note="f~_x = f_x",
    )


def tight_dual(frame: SampledFrame, bound: float) -> DualFrame:
    """f~_x = f_x / A for a continuum tight frame with bound A."""
    if not bound > 0:
        raise FrameError(f"tight frame bound must be positive, got {bound}")
    bounds = frame_bounds(frame)
    vectors = frame.vectors / bound
    vectors.setflags(write=False)
    return DualFrame(
        base=frame,
        vectors=vectors,
        kind="tight",
        upper_bound=bounds.upper / bound ** 2,
        note=f"f~_x = f_x / {bound:.12g}",
    )


def reconstruct(dual: DualFrame, f: np.ndarray) -> np.ndarray:
    """sum_x w_x <f, f_x> f~_x."""
    coeffs = analysis(dual.base, f)
    w = dual.base.weights if coeffs.ndim == 1 else dual.base.weights[:, None]
    return dual.vectors @ (w * coeffs)


def reconstruction_residual(dual: DualFrame, f: np.ndarray) -> float:
    """Largest relative reconstruction error over the columns of ``f``."""
    f = np.atleast_2d(np.asarray(f).T).T
    err = np.linalg.norm(reconstruct(dual, f) - f, axis=0)
    return float(np.max(err / np.maximum(np.linalg.norm(f, axis=0), 1e-300)))
