"""Operators on a frame's realization space, with frame context and provenance."""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional

import numpy as np

from weakloc.core.errors import ContextMismatchError, OperatorError
from weakloc.frames.duals import DualFrame
from weakloc.frames.sampled import SampledFrame

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FrameContext:
    """A sampled frame together with the dual used for synthesis and analysis."""
    frame: SampledFrame
    dual: DualFrame

    def __post_init__(self):
        if self.dual.base is not self.frame:
            raise OperatorError("dual frame was built for a different frame")

    @property
    def dim(self) -> int:
        return self.frame.dim

    @property
    def domain(self):
        return self.frame.domain

    @property
    def is_parseval(self) -> bool:
        return self.dual.kind == "parseval"

    def describe(self) -> Dict[str, Any]:
        return {"frame": self.frame.describe(), "dual": self.dual.describe()}


class ProvenanceKind(str, Enum):
    MULTIPLIER = "Multiplier"
    BLOCK = "Block"
    APPROXIMANT = "Approximant"
    COMPOSITION = "Composition"
    ADJOINT = "Adjoint"
    TRANSLATION = "Translation"
    CUSTOM = "Custom"


@dataclass(frozen=True)
class Provenance:
    kind: ProvenanceKind
    detail: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind.value, **self.detail}


class LocalizedOperator:
    """
    A matrix acting on the realization space of a frame context.

    The action is copied and frozen at construction.
    """

    def __init__(self, action: np.ndarray, context: FrameContext, provenance: Provenance):
        action = np.array(action, dtype=complex if np.iscomplexobj(action) else float)
        n = context.dim
        if action.shape != (n, n):
            raise OperatorError(
                f"action of shape {action.shape} on a {n}-dimensional realization space"
            )
        action.setflags(write=False)
        self.action = action
        self.context = context
        self.provenance = provenance

    @property
    def dim(self) -> int:
        return self.action.shape[0]

    def apply(self, f: np.ndarray) -> np.ndarray:
        f = np.asarray(f)
        if f.shape[0] != self.dim:
            raise OperatorError(f"vector of length {f.shape[0]} for a {self.dim}-dimensional operator")
        return self.action @ f

    def is_hermitian(self, atol: float = 1e-10) -> bool:
        return bool(np.allclose(self.action, self.action.conj().T, rtol=0.0, atol=atol))

    def describe(self) -> Dict[str, Any]:
        return {"provenance": self.provenance.to_dict(), "dim": self.dim}

    def __repr__(self) -> str:
        return f"LocalizedOperator({self.provenance.kind.value}, dim={self.dim})"


def _check_context(a: LocalizedOperator, b: LocalizedOperator) -> None:
    if a.context is not b.context and (
        a.context.frame is not b.context.frame or a.context.dual is not b.context.dual
    ):
        raise ContextMismatchError("operators are built over different frame contexts")


def compose(T1: LocalizedOperator, T2: LocalizedOperator) -> LocalizedOperator:
    """T1 T2."""
    _check_context(T1, T2)
    return LocalizedOperator(
        T1.action @ T2.action,
        T1.context,
        Provenance(
            ProvenanceKind.COMPOSITION,
            {"left": T1.provenance.to_dict(), "right": T2.provenance.to_dict()},
        ),
    )


def adjoint(T: LocalizedOperator) -> LocalizedOperator:
    """Conjugate transpose."""
    return LocalizedOperator(
        T.action.conj().T,
        T.context,
        Provenance(ProvenanceKind.ADJOINT, {"of": T.provenance.to_dict()}),
    )


def identity_operator(context: FrameContext) -> LocalizedOperator:
    return LocalizedOperator(np.eye(context.dim), context, Provenance(ProvenanceKind.CUSTOM, {"label": "identity"}))


def zero_operator(context: FrameContext) -> LocalizedOperator:
    return LocalizedOperator(
        np.zeros((context.dim, context.dim)), context, Provenance(ProvenanceKind.CUSTOM, {"label": "zero"})
    )


def custom_operator(context: FrameContext, action: np.ndarray, label: str = "custom") -> LocalizedOperator:
    return LocalizedOperator(action, context, Provenance(ProvenanceKind.CUSTOM, {"label": label}))


def scaled(T: LocalizedOperator, factor: complex, label: Optional[str] = None) -> LocalizedOperator:
    """factor * T, recorded as a custom operator."""
    return LocalizedOperator(
        factor * T.action,
        T.context,
        Provenance(ProvenanceKind.CUSTOM, {"label": label or f"{factor}*T", "of": T.provenance.to_dict()}),
    )
