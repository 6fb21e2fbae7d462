"""Metric measure spaces: the Euclidean plane, the affine group and the disc."""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import Tuple

import numpy as np

from weakloc.core.errors import GeometryError


class SpaceTag(str, Enum):
    """Index spaces supported by the library."""
    EUCLIDEAN_2D = "Euclidean2D"
    AFFINE_GROUP = "AffineGroup"
    BERGMAN_DISC = "BergmanDisc"


@dataclass(frozen=True)
class Point:
    """A point of one of the index spaces, in its natural coordinates."""
    space_tag: SpaceTag
    coords: Tuple[float, float]

    def __post_init__(self):
        if len(self.coords) != 2:
            raise GeometryError(f"expected two coordinates, got {self.coords!r}")
        object.__setattr__(self, "coords", (float(self.coords[0]), float(self.coords[1])))
        space_for(self.space_tag).validate(np.asarray([self.coords]))


def as_coords(points) -> np.ndarray:
    """Coerce a point, coordinate pair or (n, 2) array into an (n, 2) float array."""
    if isinstance(points, Point):
        return np.asarray([points.coords], dtype=float)
    arr = np.asarray(points, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise GeometryError(f"coordinates must have shape (n, 2), got {arr.shape}")
    return arr


def _arccosh1p(x: np.ndarray) -> np.ndarray:
    """arccosh(1 + x) for x >= 0, accurate near 0."""
    x = np.maximum(x, 0.0)
    return np.log1p(x + np.sqrt(x * (x + 2.0)))


class MetricMeasureSpace(ABC):
    """
    A metric measure space (X, d, lambda) with a distinguished basepoint.

    All methods are vectorized over (n, 2) coordinate arrays. ``density`` is
    the density of lambda against Lebesgue measure in the coordinates.
    """

    tag: SpaceTag
    is_group: bool = False

    @property
    @abstractmethod
    def basepoint(self) -> Tuple[float, float]:
        """Coordinates of the basepoint e (the group identity where one exists)."""

    @abstractmethod
    def _invalid_mask(self, X: np.ndarray) -> np.ndarray:
        """Boolean mask of rows outside the valid coordinate domain."""

    @abstractmethod
    def pairwise_distance(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        """(n, m) matrix of distances d(X_i, Y_j)."""

    @abstractmethod
    def density(self, X: np.ndarray) -> np.ndarray:
        """Density of lambda at each row of X."""

    @abstractmethod
    def ball_measure(self, r: float) -> float:
        """Continuum measure of a ball of radius r."""

    def validate(self, X: np.ndarray) -> None:
        bad = self._invalid_mask(X)
        if np.any(bad):
            first = X[np.argmax(bad)]
            raise GeometryError(
                f"{int(bad.sum())} point(s) outside the {self.tag.value} domain, e.g. {tuple(first)}"
            )

    def point(self, a: float, b: float) -> Point:
        return Point(self.tag, (a, b))

    def _check_point(self, x: Point) -> np.ndarray:
        if x.space_tag != self.tag:
            raise GeometryError(
                f"point lives in {x.space_tag.value}, expected {self.tag.value}"
            )
        return np.asarray([x.coords], dtype=float)

    def distance(self, x: Point, y: Point) -> float:
        """Closed-form distance between two points of this space."""
        return float(self.pairwise_distance(self._check_point(x), self._check_point(y))[0, 0])

    def measure_weight(self, x: Point) -> float:
        """Density of lambda at x."""
        return float(self.density(self._check_point(x))[0])

    def basepoint_distance(self, X: np.ndarray) -> np.ndarray:
        return self.pairwise_distance(X, np.asarray([self.basepoint]))[:, 0]

    # group structure; only meaningful when is_group is True
    def multiply(self, y: Tuple[float, float], X: np.ndarray) -> np.ndarray:
        raise GeometryError(f"{self.tag.value} carries no group structure")

    def inverse(self, y: Tuple[float, float]) -> Tuple[float, float]:
        raise GeometryError(f"{self.tag.value} carries no group structure")


class Euclidean2D(MetricMeasureSpace):
    """Time-frequency plane R^2 with the Euclidean metric and Lebesgue measure."""

    tag = SpaceTag.EUCLIDEAN_2D
    is_group = True

    @property
    def basepoint(self) -> Tuple[float, float]:
        return (0.0, 0.0)

    def _invalid_mask(self, X: np.ndarray) -> np.ndarray:
        return ~np.all(np.isfinite(X), axis=1)

    def pairwise_distance(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        dx = X[:, None, 0] - Y[None, :, 0]
        dy = X[:, None, 1] - Y[None, :, 1]
        return np.hypot(dx, dy)

    def density(self, X: np.ndarray) -> np.ndarray:
        return np.ones(len(X))

    def ball_measure(self, r: float) -> float:
        return float(np.pi * r * r)

    def multiply(self, y, X):
        return X + np.asarray(y, dtype=float)[None, :]

    def inverse(self, y):
        return (-float(y[0]), -float(y[1]))


class AffineGroup(MetricMeasureSpace):
    """
    The ax+b group, coordinates (a, b) with a > 0.

    Left Haar measure da db / a^2, left-invariant hyperbolic metric,
    product (a1, b1)(a2, b2) = (a1 a2, a1 b2 + b1), identity (1, 0).
    """

    tag = SpaceTag.AFFINE_GROUP
    is_group = True

    @property
    def basepoint(self) -> Tuple[float, float]:
        return (1.0, 0.0)

    def _invalid_mask(self, X: np.ndarray) -> np.ndarray:
        return ~(np.all(np.isfinite(X), axis=1) & (X[:, 0] > 0))

    def pairwise_distance(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        a1, b1 = X[:, None, 0], X[:, None, 1]
        a2, b2 = Y[None, :, 0], Y[None, :, 1]
        arg = ((a1 - a2) ** 2 + (b1 - b2) ** 2) / (2.0 * a1 * a2)
        return _arccosh1p(arg)

    def density(self, X: np.ndarray) -> np.ndarray:
        return 1.0 / X[:, 0] ** 2

    def ball_measure(self, r: float) -> float:
        return float(2.0 * np.pi * (np.cosh(r) - 1.0))

    def multiply(self, y, X):
        a, b = float(y[0]), float(y[1])
        return np.column_stack([a * X[:, 0], a * X[:, 1] + b])

    def inverse(self, y):
        a, b = float(y[0]), float(y[1])
        return (1.0 / a, -b / a)


class BergmanDisc(MetricMeasureSpace):
    """
    Unit disc with the Bergman metric artanh|z-w|/|1 - conj(z) w|.

    The measure is the one that makes normalized reproducing kernels a
    Parseval frame: d lambda = dA / (pi (1 - |z|^2)^2).
    """

    tag = SpaceTag.BERGMAN_DISC

    @property
    def basepoint(self) -> Tuple[float, float]:
        return (0.0, 0.0)

    def _invalid_mask(self, X: np.ndarray) -> np.ndarray:
        return ~(np.all(np.isfinite(X), axis=1) & (X[:, 0] ** 2 + X[:, 1] ** 2 < 1.0))

    @staticmethod
    def complex_coords(X: np.ndarray) -> np.ndarray:
        return X[:, 0] + 1j * X[:, 1]

    def pairwise_distance(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        z = self.complex_coords(X)[:, None]
        w = self.complex_coords(Y)[None, :]
        rho = np.abs(z - w) / np.abs(1.0 - np.conj(z) * w)
        return np.arctanh(np.minimum(rho, 1.0 - 1e-16))

    def density(self, X: np.ndarray) -> np.ndarray:
        r2 = X[:, 0] ** 2 + X[:, 1] ** 2
        return 1.0 / (np.pi * (1.0 - r2) ** 2)

    def ball_measure(self, r: float) -> float:
        return float(np.sinh(r) ** 2)


_SPACES = {
    SpaceTag.EUCLIDEAN_2D: Euclidean2D(),
    SpaceTag.AFFINE_GROUP: AffineGroup(),
    SpaceTag.BERGMAN_DISC: BergmanDisc(),
}


def space_for(tag) -> MetricMeasureSpace:
    """Shared space instance for a tag (or its string value)."""
    try:
        return _SPACES[SpaceTag(tag)]
    except ValueError as exc:
        raise GeometryError(f"unknown space: {tag!r}") from exc


def distance(space: MetricMeasureSpace, x: Point, y: Point) -> float:
    return space.distance(x, y)


def measure_weight(space: MetricMeasureSpace, x: Point) -> float:
    return space.measure_weight(x)
