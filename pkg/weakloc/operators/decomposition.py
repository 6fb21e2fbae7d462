"""Block decomposition T_j over a cover and the approximant A = sum_j T_j."""

import logging

import numpy as np

from weakloc.core.errors import CoverError, OperatorError
from weakloc.geometry.covers import Cover
from weakloc.operators.localized import LocalizedOperator, Provenance, ProvenanceKind
from weakloc.operators.multipliers import local_matrix

logger = logging.getLogger(__name__)


def _check_cover(T: LocalizedOperator, cover: Cover) -> int:
    n = len(T.context.domain)
    covered = sum(len(c) for c in cover.cells)
    if covered != n or any(np.max(g, initial=-1) >= n for g in cover.expansions):
        raise OperatorError(f"cover does not index the {n} nodes of the operator's domain")
    return n


def block_component(T: LocalizedOperator, cover: Cover, j: int) -> LocalizedOperator:
    """
    T_j f = sum_{y in F_j} sum_{x in G_j} w_y w_x <f, f_x> <T f~_x, f_y> f~_y.

    The left factor has |F_j| columns, so rank(T_j) <= |F_j|.
    """
    _check_cover(T, cover)
    if not 0 <= j < len(cover):
        raise CoverError(f"cell index {j} out of range for a cover with {len(cover)} cells")
    frame, dual = T.context.frame, T.context.dual
    F_j = np.asarray(cover.cells[j], dtype=int)
    G_j = np.asarray(cover.expansions[j], dtype=int)
    w = frame.weights
    M = local_matrix(T)[np.ix_(F_j, G_j)]
    action = (dual.vectors[:, F_j] * w[F_j][None, :]) @ M @ (
        frame.vectors[:, G_j] * w[G_j][None, :]
    ).conj().T
    return LocalizedOperator(
        action, T.context,
        Provenance(ProvenanceKind.BLOCK, {"j": int(j), "cover": cover.describe()}),
    )


def approximant_mask(cover: Cover, n: int) -> np.ndarray:
    """Boolean mask[y, x]: x lies in the expansion of the cell owning y."""
    mask = np.zeros((n, n), dtype=bool)
    for cell, expansion in zip(cover.cells, cover.expansions):
        mask[np.ix_(np.asarray(cell, dtype=int), np.asarray(expansion, dtype=int))] = True
    return mask


def approximant(T: LocalizedOperator, cover: Cover) -> LocalizedOperator:
    """
    A = sum_j T_j, assembled in one pass.

    Equals F~ W (M o mask) W F^H with M[y, x] = <T f~_x, f_y>.
    """
    n = _check_cover(T, cover)
    frame, dual = T.context.frame, T.context.dual
    w = frame.weights
    masked = np.where(approximant_mask(cover, n), local_matrix(T), 0.0)
    action = (dual.vectors * w[None, :]) @ masked @ (frame.vectors * w[None, :]).conj().T
    logger.debug("approximant over %d cells at r=%g", len(cover), cover.r)
    return LocalizedOperator(
        action, T.context,
        Provenance(ProvenanceKind.APPROXIMANT, {"cover": cover.describe()}),
    )


def reconstruction(T: LocalizedOperator) -> LocalizedOperator:
    """The discrete reconstruction of T (the approximant with every G_j = X)."""
    frame, dual = T.context.frame, T.context.dual
    w = frame.weights
    action = (dual.vectors * w[None, :]) @ local_matrix(T) @ (frame.vectors * w[None, :]).conj().T
    return LocalizedOperator(
        action, T.context,
        Provenance(ProvenanceKind.APPROXIMANT, {"cover": "full"}),
    )
