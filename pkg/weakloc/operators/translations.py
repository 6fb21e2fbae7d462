"""Translation operators U_y h = sum_x w_x <h, f~_x> pi(y) f_x."""

import logging
from typing import List, Tuple

import numpy as np

from weakloc.core.errors import OperatorError
from weakloc.geometry.spaces import as_coords
from weakloc.operators.localized import FrameContext, LocalizedOperator, Provenance, ProvenanceKind

logger = logging.getLogger(__name__)


def translated_vectors(context: FrameContext, y, X: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Realized pi(y) f_x for the rows of X.

    Returns the vectors and the coordinates of y x.
    """
    family = context.frame.family
    Y, phase = family.act(tuple(map(float, y)), as_coords(X))
    return family.realize(Y) * phase[None, :], Y


def translation_operator(context: FrameContext, y) -> Tuple[LocalizedOperator, List[str]]:
    """
    U_y over a group-structured frame context.

    Nodes whose translate y x leaves the truncation are dropped from the
    sum; the returned warnings say how many.

    Args:
        context: Frame context over Euclidean2D or the affine group
        y: Group element as coordinates

    Returns:
        (LocalizedOperator, warnings)
    """
    domain = context.domain
    if not domain.space.is_group:
        raise OperatorError(f"{domain.tag.value} carries no group structure")
    y = tuple(map(float, as_coords(y)[0]))
    moved, Y = translated_vectors(context, y, domain.nodes)

    inside = domain.space.basepoint_distance(Y) <= domain.truncation_radius + 1e-9
    warnings: List[str] = []
    if not inside.all():
        warnings.append(
            f"translate by {y} moves {int((~inside).sum())} of {len(domain)} nodes "
            f"outside the truncation; they are left out"
        )
        logger.warning(warnings[-1])

    coeff = domain.weights * inside
    action = (moved * coeff[None, :]) @ context.dual.vectors.conj().T
    T = LocalizedOperator(
        action, context,
        Provenance(ProvenanceKind.TRANSLATION, {"y": list(y), "dropped": int((~inside).sum())}),
    )
    return T, warnings
