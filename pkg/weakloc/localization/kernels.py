"""Kernel matrices |<f_x, g_y>| over the nodes of a sampled domain."""

import logging
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from weakloc.core.errors import LocalizationError
from weakloc.core.parallel import assemble_rows
from weakloc.frames.sampled import SampledFrame, TransformedFamily
from weakloc.geometry.grids import SampledDomain

logger = logging.getLogger(__name__)

Family = Union[SampledFrame, TransformedFamily]


@dataclass
class KernelMatrix:
    """Nonnegative entries K[x, y] indexed by the nodes of ``domain``."""
    entries: np.ndarray
    domain: SampledDomain
    label: str
    symmetric: bool = False

    def __post_init__(self):
        n = len(self.domain)
        if self.entries.shape != (n, n):
            raise LocalizationError(f"kernel of shape {self.entries.shape} over {n} nodes")
        if np.any(self.entries < 0):
            raise LocalizationError("kernel entries must be nonnegative")

    @property
    def weights(self) -> np.ndarray:
        return self.domain.weights

    @classmethod
    def from_function(cls, domain: SampledDomain, fn, label: str = "custom") -> "KernelMatrix":
        """Kernel K[x, y] = fn(d(x, y)) of the pairwise distance."""
        return cls(np.asarray(fn(domain.distances), dtype=float), domain, label, symmetric=True)


def _same_domain(a: SampledDomain, b: SampledDomain) -> bool:
    return a is b or (
        a.tag == b.tag and a.nodes.shape == b.nodes.shape and np.array_equal(a.nodes, b.nodes)
    )


def kernel_matrix(F: Family, G: Optional[SampledFrame] = None) -> KernelMatrix:
    """
    Entrywise |<f_x, g_y>| over a shared node set.

    Frames paired with themselves use the closed-form Gram; transformed
    families go through the realization.

    Args:
        F: Sampled frame or transformed family {f_x}
        G: Sampled frame {g_y}; defaults to F

    Returns:
        KernelMatrix K[x, y] = |<f_x, g_y>|
    """
    if G is None:
        if not isinstance(F, SampledFrame):
            raise LocalizationError("a transformed family must be paired with a frame")
        G = F
    if not _same_domain(F.domain, G.domain):
        raise LocalizationError("kernel families are indexed by different domains")

    if F is G:
        K = np.abs(F.gram)
        label = F.family.tag.value
        return KernelMatrix(K, F.domain, label, symmetric=True)

    if F.dim != G.dim:
        raise LocalizationError(f"realization dimensions differ: {F.dim} vs {G.dim}")
    Fv, Gc = F.vectors, np.conj(G.vectors)
    K = assemble_rows(lambda s, e: np.abs(Fv[:, s:e].T @ Gc), len(F))
    label = getattr(F, "label", None) or F.family.tag.value
    logger.debug("kernel %s: %d nodes through the realization", label, len(F))
    return KernelMatrix(K, F.domain, label)


def compose_kernels(K1: KernelMatrix, K2: KernelMatrix) -> KernelMatrix:
    """(K1 * K2)[x, z] = sum_y w_y K1[x, y] K2[y, z]."""
    if not _same_domain(K1.domain, K2.domain):
        raise LocalizationError("composed kernels live on different domains")
    w = K1.weights
    return KernelMatrix(
        (K1.entries * w[None, :]) @ K2.entries,
        K1.domain,
        f"({K1.label})*({K2.label})",
    )
