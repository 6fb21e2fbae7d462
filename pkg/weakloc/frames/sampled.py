"""Sampled frames: nodes, weights and a family, with analysis and synthesis."""

import logging
import threading
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import linalg

from weakloc.core.errors import DegenerateFrameError, FrameError
from weakloc.core.parallel import assemble_rows
from weakloc.frames.families import (
    BergmanKernelFamily,
    FrameFamily,
    GaborGaussianFamily,
    HaarWaveletFamily,
    OrthonormalTestFamily,
    ScaledFamily,
    bergman_degree_for,
    bergman_tail,
)
from weakloc.geometry.grids import SampledDomain
from weakloc.geometry.spaces import SpaceTag, space_for

logger = logging.getLogger(__name__)

DEFAULT_RANK_CUTOFF = 1e-8


class SampledFrame:
    """
    A frame family restricted to the nodes of a sampled domain.

    ``vectors`` (realization_dim x n) and ``gram`` (n x n, G[x, y] =
    <f_y, f_x>) are computed on first access under a lock and then kept
    read-only.
    """

    def __init__(self, domain: SampledDomain, family: FrameFamily):
        if family.space_tag != domain.tag:
            raise FrameError(
                f"{family.tag.value} frames are indexed by {family.space_tag.value}, "
                f"got a {domain.tag.value} domain"
            )
        self.domain = domain
        self.family = family
        self._vectors: Optional[np.ndarray] = None
        self._gram: Optional[np.ndarray] = None
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self.domain)

    @property
    def weights(self) -> np.ndarray:
        return self.domain.weights

    @property
    def dim(self) -> int:
        return self.family.realization_dim

    @property
    def vectors(self) -> np.ndarray:
        if self._vectors is None:
            with self._lock:
                if self._vectors is None:
                    v = self.family.realize(self.domain.nodes)
                    v.setflags(write=False)
                    self._vectors = v
        return self._vectors

    @property
    def gram(self) -> np.ndarray:
        if self._gram is None:
            with self._lock:
                if self._gram is None:
                    nodes = self.domain.nodes
                    g = assemble_rows(
                        lambda s, e: np.conj(self.family.pair_inner_matrix(nodes[s:e], nodes)),
                        len(nodes),
                    )
                    g = 0.5 * (g + g.conj().T)
                    g.setflags(write=False)
                    self._gram = g
        return self._gram

    def scaled(self, factor: float) -> "SampledFrame":
        """The same frame with every vector multiplied by ``factor``."""
        return SampledFrame(self.domain, ScaledFamily(self.family, factor))

    def describe(self) -> dict:
        out = self.family.describe()
        out.update(self.domain.describe())
        return out


def _check_vector(frame: SampledFrame, f: np.ndarray) -> np.ndarray:
    f = np.asarray(f)
    if f.shape[0] != frame.dim:
        raise FrameError(f"vector of length {f.shape[0]} in a {frame.dim}-dimensional space")
    return f


def analysis(frame: SampledFrame, f: np.ndarray) -> np.ndarray:
    """Coefficients (<f, f_x>)_x. Accepts a vector or a matrix of column vectors."""
    f = _check_vector(frame, f)
    return frame.vectors.conj().T @ f


def synthesis(frame: SampledFrame, a: np.ndarray) -> np.ndarray:
    """sum_x w_x a(x) f_x."""
    a = np.asarray(a)
    if a.shape[0] != len(frame):
        raise FrameError(f"{a.shape[0]} coefficients for {len(frame)} nodes")
    w = frame.weights if a.ndim == 1 else frame.weights[:, None]
    return frame.vectors @ (w * a)


def frame_operator(frame: SampledFrame) -> np.ndarray:
    """Discrete S = sum_x w_x f_x <., f_x>."""
    F = frame.vectors
    S = (F * frame.weights[None, :]) @ F.conj().T
    return 0.5 * (S + S.conj().T)


@dataclass
class FrameBounds:
    """Extreme eigenvalues of S on the resolved span (or a test subspace)."""
    lower: float
    upper: float
    resolved_rank: int

    def __iter__(self):
        return iter((self.lower, self.upper))


def frame_bounds(
    frame: SampledFrame,
    subspace: Optional[np.ndarray] = None,
    rank_cutoff: float = DEFAULT_RANK_CUTOFF
) -> FrameBounds:
    """
    Frame bounds of the discrete frame operator.

    Args:
        frame: Sampled frame
        subspace: Optional (dim, k) matrix with orthonormal columns; bounds
            are then those of the compression Q^H S Q
        rank_cutoff: Eigenvalues below rank_cutoff * C count as unresolved; with
            rank_cutoff <= 0 every eigenvalue counts and the lower bound is the
            smallest one, clipped at 0

    Returns:
        FrameBounds(lower, upper, resolved_rank)
    """
    S = frame_operator(frame)
    if subspace is not None:
        Q = _check_vector(frame, subspace)
        S = Q.conj().T @ S @ Q
    eigs = linalg.eigh(S, eigvals_only=True)
    upper = float(eigs[-1])
    if upper <= 0:
        raise DegenerateFrameError("frame operator vanishes (C = 0)")
    if rank_cutoff <= 0:
        return FrameBounds(max(float(eigs[0]), 0.0), upper, int(len(eigs)))
    resolved = eigs[eigs > rank_cutoff * upper]
    return FrameBounds(float(resolved[0]), upper, int(len(resolved)))


def realization_error(
    frame: SampledFrame,
    n_pairs: int = 200,
    seed: int = 0
) -> float:
    """Largest |<realize(x), realize(y)> - pair_inner(x, y)| over random node pairs."""
    rng = np.random.default_rng(seed)
    n = len(frame)
    i = rng.integers(0, n, size=n_pairs)
    j = rng.integers(0, n, size=n_pairs)
    F = frame.vectors
    realized = np.einsum("ki,ki->i", F[:, i], F[:, j].conj())
    nodes = frame.domain.nodes
    closed = np.array([
        frame.family.pair_inner_matrix(nodes[a:a + 1], nodes[b:b + 1])[0, 0] for a, b in zip(i, j)
    ])
    return float(np.max(np.abs(realized - closed)))


def gabor_interior_subspace(frame: SampledFrame, radius: Optional[float] = None) -> np.ndarray:
    """
    Orthonormal basis of the span of integer-lattice Gabor atoms within ``radius``.

    These atoms sit well inside the truncated domain, so S acts on their
    span like the continuum frame operator. The default radius is a quarter
    of the truncation radius.
    """
    if not isinstance(frame.family, GaborGaussianFamily):
        raise FrameError("interior test subspace is defined for Gabor frames")
    R = frame.domain.truncation_radius / 4.0 if radius is None else float(radius)
    k = int(np.floor(R))
    ticks = np.arange(-k, k + 1, dtype=float)
    xx, yy = np.meshgrid(ticks, ticks, indexing="ij")
    pts = np.column_stack([xx.ravel(), yy.ravel()])
    pts = pts[np.hypot(pts[:, 0], pts[:, 1]) <= R + 1e-12]
    return linalg.orth(frame.family.realize(pts))


def gabor_gaussian_frame(
    domain: SampledDomain,
    time_step: float = 0.05,
    window_halfwidth: float = 7.0
) -> SampledFrame:
    """
    Gabor frame of the normalized Gaussian over a plane domain.

    The time grid spans max|x| + window_halfwidth on each side.
    """
    if domain.tag is not SpaceTag.EUCLIDEAN_2D:
        raise FrameError(f"Gabor frames need a Euclidean2D domain, got {domain.tag.value}")
    half_span = float(np.abs(domain.nodes[:, 0]).max()) + window_halfwidth
    frame = SampledFrame(domain, GaborGaussianFamily(time_step, half_span))
    logger.info("Gabor frame: %d nodes, realization dim %d", len(frame), frame.dim)
    return frame


def haar_wavelet_frame(domain: SampledDomain) -> SampledFrame:
    """Haar wavelet frame over an affine-group domain."""
    if domain.tag is not SpaceTag.AFFINE_GROUP:
        raise FrameError(f"Haar frames need an AffineGroup domain, got {domain.tag.value}")
    frame = SampledFrame(domain, HaarWaveletFamily.for_nodes(domain.nodes))
    logger.info("Haar frame: %d nodes, realization dim %d", len(frame), frame.dim)
    return frame


def bergman_disc_frame(
    domain: SampledDomain,
    degree_cap: Optional[int] = None,
    tolerance: float = 1e-6
) -> SampledFrame:
    """
    Frame of normalized Bergman kernels over a disc domain.

    Without ``degree_cap`` the smallest cap meeting ``tolerance`` at the
    outermost node is used; an explicit cap that misses it is an error.
    """
    if domain.tag is not SpaceTag.BERGMAN_DISC:
        raise FrameError(f"Bergman frames need a BergmanDisc domain, got {domain.tag.value}")
    rho_max = float(np.hypot(domain.nodes[:, 0], domain.nodes[:, 1]).max())
    if degree_cap is None:
        degree_cap = bergman_degree_for(rho_max, tolerance)
    elif bergman_tail(rho_max, degree_cap) > tolerance:
        raise FrameError(
            f"degree_cap={degree_cap} too small for nodes out to |z|={rho_max:.4f}: "
            f"kernel tail {bergman_tail(rho_max, degree_cap):.2e} exceeds {tolerance:.1e}; "
            f"need at least {bergman_degree_for(rho_max, tolerance)}"
        )
    frame = SampledFrame(domain, BergmanKernelFamily(degree_cap))
    logger.info("Bergman frame: %d nodes, degree cap %d", len(frame), degree_cap)
    return frame


def orthonormal_test_frame(n: int) -> SampledFrame:
    """Standard basis of C^n indexed by n unit-spaced nodes with counting weights."""
    if n < 1:
        raise FrameError("orthonormal test frame needs at least one node")
    x = np.arange(n, dtype=float) - np.floor(n / 2.0)
    nodes = np.column_stack([x, np.zeros(n)])
    domain = SampledDomain(
        space_for(SpaceTag.EUCLIDEAN_2D), nodes, np.ones(n), max(float(np.abs(x).max()), 1.0), 1.0
    )
    return SampledFrame(domain, OrthonormalTestFamily(x))


class TransformedFamily:
    """
    Realized vectors indexed by the nodes of a domain, with no closed form.

    Used for operator-transformed families such as {T f~_x}, whose inner
    products are only available through the realization.
    """

    def __init__(self, domain: SampledDomain, vectors: np.ndarray, label: str = "transformed"):
        vectors = np.asarray(vectors)
        if vectors.ndim != 2 or vectors.shape[1] != len(domain):
            raise FrameError(
                f"expected one realized vector per node ({len(domain)}), got shape {vectors.shape}"
            )
        self.domain = domain
        self.vectors = vectors
        self.label = label

    def __len__(self) -> int:
        return len(self.domain)

    @property
    def weights(self) -> np.ndarray:
        return self.domain.weights

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]
