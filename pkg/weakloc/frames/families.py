"""Frame families: closed-form inner products plus vector realizations."""

from abc import ABC, abstractmethod
from enum import Enum
from typing import Optional, Tuple

import numpy as np
from scipy import integrate

from weakloc.core.errors import FrameError
from weakloc.geometry.spaces import Point, SpaceTag, as_coords, space_for


class FamilyTag(str, Enum):
    GABOR_GAUSSIAN = "GaborGaussian"
    HAAR_WAVELET = "HaarWavelet"
    BERGMAN_KERNEL = "BergmanKernel"
    ORTHONORMAL_TEST = "OrthonormalTest"


class FrameFamily(ABC):
    """
    A family {f_x} indexed by points of a space.

    ``pair_inner_matrix(X, Y)[i, j]`` is <f_{X_i}, f_{Y_j}>, linear in the
    first slot. ``realize(X)`` returns the vectors as columns of a
    (realization_dim, n) matrix in a finite-dimensional Hilbert space whose
    inner products reproduce ``pair_inner_matrix`` up to
    ``realization_tolerance``.
    """

    tag: FamilyTag
    space_tag: SpaceTag
    realization_tolerance: float = 1e-6
    unit_norm: bool = True

    @abstractmethod
    def pair_inner_matrix(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        """(n, m) matrix of <f_{X_i}, f_{Y_j}>."""

    @abstractmethod
    def realize(self, X: np.ndarray) -> np.ndarray:
        """(realization_dim, n) matrix whose columns are the realized f_{X_i}."""

    @property
    @abstractmethod
    def realization_dim(self) -> int:
        """Dimension of the realization space."""

    def pair_inner(self, x: Point, y: Point) -> complex:
        for p in (x, y):
            if p.space_tag != self.space_tag:
                raise FrameError(f"{self.tag.value} is indexed by {self.space_tag.value}")
        return complex(self.pair_inner_matrix(as_coords(x), as_coords(y))[0, 0])

    def act(self, y: Tuple[float, float], X: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """
        Group action on the family: pi(y) f_x = phase * f_{y x}.

        Returns the coordinates of y x and the unimodular phases.
        """
        raise FrameError(f"{self.tag.value} has no group action")

    def far_pairs(self) -> Tuple[np.ndarray, np.ndarray]:
        """Extra index pairs for the pointwise localization sweep."""
        return np.empty((0, 2)), np.empty((0, 2))

    def describe(self) -> dict:
        return {"family": self.tag.value, "realization_dim": self.realization_dim}


class GaborGaussianFamily(FrameFamily):
    """
    Time-frequency shifts M_xi T_x psi of psi(t) = pi^(-1/4) exp(-t^2 / 2).

    Realized on the uniform time grid t_k = t_min + k dt, scaled by sqrt(dt)
    so that Euclidean inner products approximate L^2 ones.
    """

    tag = FamilyTag.GABOR_GAUSSIAN
    space_tag = SpaceTag.EUCLIDEAN_2D

    def __init__(self, time_step: float, half_span: float):
        if time_step <= 0 or half_span <= 0:
            raise FrameError("time_step and half_span must be positive")
        k = int(np.ceil(half_span / time_step))
        self.time_step = float(time_step)
        self.times = time_step * np.arange(-k, k + 1)

    @property
    def realization_dim(self) -> int:
        return len(self.times)

    def pair_inner_matrix(self, X, Y):
        X, Y = as_coords(X), as_coords(Y)
        dx = X[:, None, 0] - Y[None, :, 0]
        dxi = X[:, None, 1] - Y[None, :, 1]
        mid = 0.5 * (X[:, None, 0] + Y[None, :, 0])
        return np.exp(-dx ** 2 / 4.0 - np.pi ** 2 * dxi ** 2) * np.exp(2j * np.pi * dxi * mid)

    def realize(self, X):
        X = as_coords(X)
        t = self.times[:, None]
        envelope = np.pi ** -0.25 * np.exp(-0.5 * (t - X[None, :, 0]) ** 2)
        return np.sqrt(self.time_step) * envelope * np.exp(2j * np.pi * X[None, :, 1] * t)

    def act(self, y, X):
        X = as_coords(X)
        u = float(y[0])
        return space_for(self.space_tag).multiply(y, X), np.exp(-2j * np.pi * X[:, 1] * u)

    def describe(self):
        out = super().describe()
        out.update(time_step=self.time_step, half_span=float(self.times[-1]))
        return out


def _haar_pieces(X: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Left ends, right ends and heights of the two constant pieces of each atom."""
    a, b = X[:, 0], X[:, 1]
    left = np.stack([b, b + 0.5 * a], axis=1)
    right = np.stack([b + 0.5 * a, b + a], axis=1)
    height = np.stack([a ** -0.5, -(a ** -0.5)], axis=1)
    return left, right, height


def haar_admissibility_constant() -> float:
    """
    Integral of |h^(xi)|^2 / xi over (0, inf) for the unit-norm Haar function.

    After the substitution u = pi xi / 2 the integrand is sin^4(u) / u^3;
    the tail beyond the last panel is replaced by its mean value 3/8 u^-3.
    The value is ln 2. The window keeps unit norm; callers divide the atoms
    by this constant through ``tight_dual`` instead of rescaling the window
    to admissibility 1.
    """
    def integrand(u):
        return 0.0 if u == 0.0 else np.sin(u) ** 4 / u ** 3

    upper = 200.0 * np.pi
    head, _ = integrate.quad(integrand, 0.0, upper, limit=2000)
    return float(head + 3.0 / (16.0 * upper ** 2))


class HaarWaveletFamily(FrameFamily):
    """
    Dilated and translated Haar functions a^(-1/2) h((t - b) / a).

    Inner products come from exact piecewise integration. Atoms are realized
    in the orthonormal basis of normalized indicators of the cells cut out
    by ``breakpoints``; atoms whose jumps are breakpoints are represented
    exactly, other atoms by their cell averages.
    """

    tag = FamilyTag.HAAR_WAVELET
    space_tag = SpaceTag.AFFINE_GROUP

    def __init__(self, breakpoints: np.ndarray, far_scales: Optional[np.ndarray] = None):
        edges = np.unique(np.asarray(breakpoints, dtype=float))
        if len(edges) < 2:
            raise FrameError("Haar realization needs at least two breakpoints")
        self.edges = edges
        self.far_scales = (
            np.arange(1.0, 30.5, 0.5) if far_scales is None else np.asarray(far_scales, float)
        )

    @classmethod
    def for_nodes(cls, nodes: np.ndarray, **kwargs) -> "HaarWaveletFamily":
        left, right, _ = _haar_pieces(as_coords(nodes))
        return cls(np.concatenate([left.ravel(), right[:, 1]]), **kwargs)

    @property
    def realization_dim(self) -> int:
        return len(self.edges) - 1

    def pair_inner_matrix(self, X, Y):
        X, Y = as_coords(X), as_coords(Y)
        l1, r1, c1 = _haar_pieces(X)
        l2, r2, c2 = _haar_pieces(Y)
        out = np.zeros((len(X), len(Y)))
        for p in range(2):
            for q in range(2):
                overlap = np.minimum(r1[:, None, p], r2[None, :, q]) - np.maximum(
                    l1[:, None, p], l2[None, :, q]
                )
                out += c1[:, None, p] * c2[None, :, q] * np.maximum(overlap, 0.0)
        return out.astype(complex)

    def realize(self, X):
        X = as_coords(X)
        lo, hi = self.edges[:-1, None], self.edges[1:, None]
        left, right, height = _haar_pieces(X)
        coeff = np.zeros((len(lo), len(X)))
        for p in range(2):
            overlap = np.minimum(hi, right[None, :, p]) - np.maximum(lo, left[None, :, p])
            coeff += height[None, :, p] * np.maximum(overlap, 0.0)
        return (coeff / np.sqrt(hi - lo)).astype(complex)

    def act(self, y, X):
        X = as_coords(X)
        return space_for(self.space_tag).multiply(y, X), np.ones(len(X), dtype=complex)

    def far_pairs(self):
        # small atoms straddling the middle jump of the unit atom
        a = np.exp(-self.far_scales)
        small = np.column_stack([a, 0.5 - 0.5 * a])
        unit = np.tile([1.0, 0.0], (len(a), 1))
        return unit, small

    def describe(self):
        out = super().describe()
        out.update(support=[float(self.edges[0]), float(self.edges[-1])])
        return out


def bergman_tail(rho_max: float, degree_cap: int) -> float:
    """Worst-case truncation error of <k_z, k_w> for |z|, |w| <= rho_max."""
    q = rho_max ** 2
    n = degree_cap
    return float(q ** (n + 1) * (n + 2 - (n + 1) * q))


def bergman_degree_for(rho_max: float, tolerance: float) -> int:
    """Smallest degree cap whose kernel tail at rho_max is within tolerance."""
    n = 1
    while bergman_tail(rho_max, n) > tolerance:
        n = int(np.ceil(n * 1.25)) + 1
    lo, hi = max(1, int(n / 1.25) - 2), n
    while lo < hi:
        mid = (lo + hi) // 2
        if bergman_tail(rho_max, mid) <= tolerance:
            hi = mid
        else:
            lo = mid + 1
    return hi


class BergmanKernelFamily(FrameFamily):
    """
    Normalized reproducing kernels k_z of the Bergman space on the disc.

    Realized in the orthonormal monomial basis e_n = sqrt((n+1)/pi) w^n,
    n <= degree_cap, with coefficients (1 - |z|^2) sqrt(n+1) conj(z)^n.
    """

    tag = FamilyTag.BERGMAN_KERNEL
    space_tag = SpaceTag.BERGMAN_DISC

    def __init__(self, degree_cap: int):
        if degree_cap < 1:
            raise FrameError(f"degree_cap must be >= 1, got {degree_cap}")
        self.degree_cap = int(degree_cap)
        self._n = np.arange(self.degree_cap + 1)

    @property
    def realization_dim(self) -> int:
        return self.degree_cap + 1

    def pair_inner_matrix(self, X, Y):
        X, Y = as_coords(X), as_coords(Y)
        z = (X[:, 0] + 1j * X[:, 1])[:, None]
        w = (Y[:, 0] + 1j * Y[:, 1])[None, :]
        return (1 - np.abs(z) ** 2) * (1 - np.abs(w) ** 2) / (1 - np.conj(z) * w) ** 2

    def realize(self, X):
        X = as_coords(X)
        z = X[:, 0] + 1j * X[:, 1]
        n = self._n[:, None]
        return (1 - np.abs(z) ** 2)[None, :] * np.sqrt(n + 1.0) * np.conj(z)[None, :] ** n

    def describe(self):
        out = super().describe()
        out.update(degree_cap=self.degree_cap)
        return out


class OrthonormalTestFamily(FrameFamily):
    """Standard basis vectors indexed by the positions of a line of nodes."""

    tag = FamilyTag.ORTHONORMAL_TEST
    space_tag = SpaceTag.EUCLIDEAN_2D

    def __init__(self, positions: np.ndarray):
        self.positions = np.sort(np.asarray(positions, dtype=float))

    @property
    def realization_dim(self) -> int:
        return len(self.positions)

    def _index(self, X):
        X = as_coords(X)
        idx = np.searchsorted(self.positions, X[:, 0])
        idx = np.clip(idx, 0, len(self.positions) - 1)
        if not np.allclose(self.positions[idx], X[:, 0]) or np.any(X[:, 1] != 0):
            raise FrameError("orthonormal test family is only defined on its own nodes")
        return idx

    def pair_inner_matrix(self, X, Y):
        return (self._index(X)[:, None] == self._index(Y)[None, :]).astype(complex)

    def realize(self, X):
        idx = self._index(X)
        out = np.zeros((self.realization_dim, len(idx)), dtype=complex)
        out[idx, np.arange(len(idx))] = 1.0
        return out


class ScaledFamily(FrameFamily):
    """The family c * f_x for a positive constant c."""

    def __init__(self, base: FrameFamily, factor: float):
        if factor <= 0:
            raise FrameError("scale factor must be positive")
        self.base = base
        self.factor = float(factor)
        self.tag = base.tag
        self.space_tag = base.space_tag
        self.realization_tolerance = base.realization_tolerance * self.factor ** 2
        self.unit_norm = False

    @property
    def realization_dim(self) -> int:
        return self.base.realization_dim

    def pair_inner_matrix(self, X, Y):
        return self.factor ** 2 * self.base.pair_inner_matrix(X, Y)

    def realize(self, X):
        return self.factor * self.base.realize(X)

    def describe(self):
        out = self.base.describe()
        out.update(scale=self.factor)
        return out
