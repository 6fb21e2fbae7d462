"""Multiplier operators, frame kernels and the Berezin transform."""

import logging

import numpy as np

from weakloc.core.errors import OperatorError
from weakloc.frames.sampled import TransformedFamily
from weakloc.localization.kernels import KernelMatrix, kernel_matrix
from weakloc.operators.localized import FrameContext, LocalizedOperator, Provenance, ProvenanceKind
from weakloc.operators.symbols import Symbol

logger = logging.getLogger(__name__)


def multiplier(context: FrameContext, symbol: Symbol) -> LocalizedOperator:
    """
    T_u = sum_x w_x u(x) f_x <., f~_x>.

    Args:
        context: Frame and dual
        symbol: Bounded symbol u

    Returns:
        LocalizedOperator with Multiplier provenance
    """
    frame, dual = context.frame, context.dual
    if dual.vectors.shape != frame.vectors.shape:
        raise OperatorError("dual vectors are not resolved on the frame's realization space")
    u = symbol.eval(frame.domain.nodes, frame.domain.space)
    if not np.all(np.isfinite(u)):
        raise OperatorError(f"symbol {symbol.descriptor} is not finite on the nodes")
    coeff = frame.weights * u
    action = (frame.vectors * coeff[None, :]) @ dual.vectors.conj().T
    logger.debug("multiplier %s assembled (dim %d)", symbol.descriptor, frame.dim)
    return LocalizedOperator(
        action, context, Provenance(ProvenanceKind.MULTIPLIER, {"symbol": symbol.describe()})
    )


def transformed_dual(T: LocalizedOperator) -> np.ndarray:
    """Columns T f~_x."""
    return T.action @ T.context.dual.vectors


def frame_kernel(T: LocalizedOperator) -> KernelMatrix:
    """Kernel |<T f~_x, f_y>| of T with respect to its frame context."""
    label = T.provenance.kind.value
    moved = TransformedFamily(T.context.domain, transformed_dual(T), label=label)
    return kernel_matrix(moved, T.context.frame)


def local_matrix(T: LocalizedOperator) -> np.ndarray:
    """M[y, x] = <T f~_x, f_y>."""
    return T.context.frame.vectors.conj().T @ transformed_dual(T)


def berezin(T: LocalizedOperator) -> np.ndarray:
    """B(T)(x) = <T f~_x, f_x> at every node, phases kept."""
    F = T.context.frame.vectors
    return np.einsum("kx,kx->x", transformed_dual(T), F.conj())
