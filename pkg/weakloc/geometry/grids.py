"""Structured sampling grids with midpoint-rule quadrature weights."""

import logging
import threading
from typing import List, Optional

import numpy as np

from weakloc.core.errors import GeometryError
from weakloc.core.parallel import assemble_rows
from weakloc.geometry.spaces import (
    AffineGroup,
    BergmanDisc,
    Euclidean2D,
    MetricMeasureSpace,
    Point,
    SpaceTag,
    as_coords,
    space_for,
)

logger = logging.getLogger(__name__)

_EDGE = 1e-12


class SampledDomain:
    """
    Finite node set with positive quadrature weights on a truncated ball.

    ``grid_coords`` are the structured coordinates the grid was laid out in
    (plane: (x, xi); affine: (log a, b/a); disc: (Bergman radius, angle)).
    Covers aggregate blocks in these coordinates. The pairwise distance
    matrix is computed once, on first use, and then shared read-only.
    """

    def __init__(
        self,
        space: MetricMeasureSpace,
        nodes: np.ndarray,
        weights: np.ndarray,
        truncation_radius: float,
        resolution: float,
        grid_coords: Optional[np.ndarray] = None
    ):
        nodes = as_coords(nodes)
        weights = np.asarray(weights, dtype=float)
        if len(nodes) == 0:
            raise GeometryError("degenerate grid: zero nodes")
        if weights.shape != (len(nodes),):
            raise GeometryError(
                f"{len(nodes)} nodes but weights of shape {weights.shape}"
            )
        if np.any(weights <= 0):
            raise GeometryError("quadrature weights must be positive")
        if truncation_radius <= 0 or resolution <= 0:
            raise GeometryError("truncation_radius and resolution must be positive")
        space.validate(nodes)

        self.space = space
        self.nodes = nodes
        self.weights = weights
        self.truncation_radius = float(truncation_radius)
        self.resolution = float(resolution)
        self.grid_coords = nodes.copy() if grid_coords is None else np.asarray(grid_coords, float)
        self.basepoint_distances = space.basepoint_distance(nodes)
        if np.any(self.basepoint_distances > self.truncation_radius + 1e-9):
            raise GeometryError("node outside the truncation radius")

        self._distances: Optional[np.ndarray] = None
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self.nodes)

    @property
    def tag(self) -> SpaceTag:
        return self.space.tag

    def points(self) -> List[Point]:
        """Nodes as Point objects, in node order."""
        return [Point(self.space.tag, (float(a), float(b))) for a, b in self.nodes]

    def distance_rows(self, start: int, stop: int) -> np.ndarray:
        return self.space.pairwise_distance(self.nodes[start:stop], self.nodes)

    @property
    def distances(self) -> np.ndarray:
        """(n, n) pairwise distance matrix, assembled once."""
        if self._distances is None:
            with self._lock:
                if self._distances is None:
                    logger.debug("assembling %dx%d distance matrix", len(self), len(self))
                    d = assemble_rows(self.distance_rows, len(self))
                    d = 0.5 * (d + d.T)
                    np.fill_diagonal(d, 0.0)
                    d.setflags(write=False)
                    self._distances = d
        return self._distances

    def nearest_node(self, coords) -> int:
        """Index of the node closest to the given coordinates."""
        d = self.space.pairwise_distance(as_coords(coords), self.nodes)[0]
        return int(np.argmin(d))

    def interior_mask(self, margin: float) -> np.ndarray:
        """Nodes at distance >= margin from the truncation boundary."""
        return self.basepoint_distances <= self.truncation_radius - margin + _EDGE

    def band_mask(self, band: float) -> np.ndarray:
        """Nodes in the outer band d(x, e) >= truncation_radius - band."""
        return self.basepoint_distances >= self.truncation_radius - band - _EDGE

    def describe(self) -> dict:
        return {
            "space": self.space.tag.value,
            "nodes": int(len(self)),
            "resolution": self.resolution,
            "truncation_radius": self.truncation_radius,
            "total_weight": float(self.weights.sum()),
        }


def _euclidean_grid(space: Euclidean2D, h: float, R: float) -> SampledDomain:
    k = int(np.floor(R / h + _EDGE))
    ticks = h * np.arange(-k, k + 1)
    xx, yy = np.meshgrid(ticks, ticks, indexing="ij")
    nodes = np.column_stack([xx.ravel(), yy.ravel()])
    nodes = nodes[np.hypot(nodes[:, 0], nodes[:, 1]) <= R + _EDGE]
    weights = np.full(len(nodes), h * h)
    return SampledDomain(space, nodes, weights, R, h)


def _affine_grid(space: AffineGroup, h: float, R: float) -> SampledDomain:
    # grid in s = log a, t = b / a; da db / a^2 = ds dt
    ks = int(np.floor(R / h + _EDGE))
    t_max = np.sqrt(2.0 * (np.cosh(R) - 1.0) * np.exp(R))
    kt = int(np.ceil(t_max / h))
    s = h * np.arange(-ks, ks + 1)
    t = h * np.arange(-kt, kt + 1)
    ss, tt = np.meshgrid(s, t, indexing="ij")
    grid = np.column_stack([ss.ravel(), tt.ravel()])
    a = np.exp(grid[:, 0])
    nodes = np.column_stack([a, grid[:, 1] * a])
    keep = space.basepoint_distance(nodes) <= R + _EDGE
    nodes, grid = nodes[keep], grid[keep]
    weights = np.full(len(nodes), h * h)
    return SampledDomain(space, nodes, weights, R, h, grid_coords=grid)


def _disc_grid(space: BergmanDisc, h: float, R: float) -> SampledDomain:
    nodes, weights, grid = [], [], []
    i = 0
    while (i + 0.5) * h <= R + _EDGE:
        delta = (i + 0.5) * h
        inner, outer = np.tanh(i * h), np.tanh(min((i + 1) * h, R))
        m = int(np.ceil(np.pi * np.sinh(2.0 * delta) / h))
        theta = 2.0 * np.pi * np.arange(m) / m
        rho = np.tanh(delta)
        ring = np.column_stack([rho * np.cos(theta), rho * np.sin(theta)])
        sector_area = np.pi * (outer ** 2 - inner ** 2) / m
        nodes.append(ring)
        weights.append(space.density(ring) * sector_area)
        grid.append(np.column_stack([np.full(m, delta), theta]))
        i += 1
    if not nodes:
        raise GeometryError(f"degenerate grid: resolution {h} exceeds twice the radius {R}")
    return SampledDomain(
        space, np.vstack(nodes), np.concatenate(weights), R, h, grid_coords=np.vstack(grid)
    )


def sample_grid(space, resolution: float, truncation_radius: float) -> SampledDomain:
    """
    Sample a structured grid inside the ball of radius ``truncation_radius``.

    Args:
        space: Space instance or tag
        resolution: Grid step h in the grid coordinates
        truncation_radius: Radius R of the d-ball around the basepoint

    Returns:
        SampledDomain with midpoint-rule weights
    """
    if not isinstance(space, MetricMeasureSpace):
        space = space_for(space)
    if resolution <= 0 or truncation_radius <= 0:
        raise GeometryError("resolution and truncation_radius must be positive")

    if isinstance(space, Euclidean2D):
        domain = _euclidean_grid(space, resolution, truncation_radius)
    elif isinstance(space, AffineGroup):
        domain = _affine_grid(space, resolution, truncation_radius)
    elif isinstance(space, BergmanDisc):
        domain = _disc_grid(space, resolution, truncation_radius)
    else:
        raise GeometryError(f"no grid recipe for {space.tag.value}")

    logger.info(
        "sampled %s grid: h=%g R=%g nodes=%d",
        space.tag.value, resolution, truncation_radius, len(domain)
    )
    return domain


def line_domain(resolution: float, half_length: float, weight: Optional[float] = None) -> SampledDomain:
    """
    One-dimensional sub-case of the plane: nodes (k h, 0) for |k h| <= half_length.

    Weights default to h (the 1-D cell length).
    """
    k = int(np.floor(half_length / resolution + _EDGE))
    x = resolution * np.arange(-k, k + 1)
    nodes = np.column_stack([x, np.zeros_like(x)])
    w = np.full(len(x), resolution if weight is None else weight)
    return SampledDomain(space_for(SpaceTag.EUCLIDEAN_2D), nodes, w, half_length, resolution)


def ball_measure_sup(domain: SampledDomain, r: float) -> float:
    """
    sup over nodes x of the quadrature measure of D(x, r).

    Computed row-block by row-block so that large grids need not hold the
    full distance matrix.
    """
    if r <= 0:
        raise GeometryError("ball radius must be positive")
    w = domain.weights

    def block(start: int, stop: int) -> np.ndarray:
        d = domain.distance_rows(start, stop)
        return ((d <= r + _EDGE) @ w)[:, None]

    return float(assemble_rows(block, len(domain)).max())
