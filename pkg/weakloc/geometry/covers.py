"""Finite-overlap covers of a sampled domain by disjoint cells and r-expansions."""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np

from weakloc.core.errors import CoverError
from weakloc.geometry.grids import SampledDomain
from weakloc.geometry.spaces import SpaceTag

logger = logging.getLogger(__name__)

DEFAULT_DIAMETER_CAP = 3.0


@dataclass
class Cover:
    """
    Disjoint cells F_j with expansions G_j = {x : d(x, F_j) <= r}.

    ``overlap_N`` is the largest number of expansions containing one node,
    ``diameter_K`` the largest cell diameter divided by r. A cell's diameter
    is the diameter of its node set plus the grid resolution, i.e. the
    extent of the union of its nodes' quadrature cells.
    """
    r: float
    cells: List[np.ndarray]
    expansions: List[np.ndarray]
    overlap_N: int
    diameter_K: float
    warnings: List[str] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.cells)

    def cell_of_node(self, n_nodes: int) -> np.ndarray:
        """Cell index of every node."""
        owner = np.full(n_nodes, -1, dtype=int)
        for j, cell in enumerate(self.cells):
            owner[cell] = j
        return owner

    def describe(self) -> Dict[str, float]:
        return {
            "r": self.r,
            "cells": len(self.cells),
            "overlap_N": self.overlap_N,
            "diameter_K": self.diameter_K,
        }


@dataclass
class CoverCheck:
    """Quantities recomputed from a cover."""
    max_overlap: int
    max_cell_diameter: float
    is_partition: bool


def _node_diameter(domain: SampledDomain, cell: np.ndarray) -> float:
    if len(cell) < 2:
        return 0.0
    return float(domain.distances[np.ix_(cell, cell)].max())


def cell_diameter(domain: SampledDomain, cell: np.ndarray) -> float:
    return _node_diameter(domain, cell) + domain.resolution


def _axis_blocks(u: np.ndarray, r: float) -> np.ndarray:
    return np.floor((u - u.min()) / r + 1e-9).astype(int)


def _block_keys(domain: SampledDomain, r: float) -> List[Tuple[int, int]]:
    g = domain.grid_coords
    if domain.tag is SpaceTag.BERGMAN_DISC:
        radial = np.floor(g[:, 0] / r + 1e-9).astype(int)
        R = domain.truncation_radius
        angular = np.zeros(len(g), dtype=int)
        for k in np.unique(radial):
            rows = radial == k
            outer = min((k + 1) * r, R)
            n_ang = max(1, int(np.ceil(np.pi * np.sinh(2.0 * outer) / r)))
            angular[rows] = np.floor(g[rows, 1] / (2.0 * np.pi) * n_ang).astype(int) % n_ang
        return list(zip(radial.tolist(), angular.tolist()))
    return list(zip(_axis_blocks(g[:, 0], r).tolist(), _axis_blocks(g[:, 1], r).tolist()))


def _split(domain: SampledDomain, cell: np.ndarray, cap: float) -> List[np.ndarray]:
    if len(cell) < 2 or cell_diameter(domain, cell) <= cap:
        return [cell]
    g = domain.grid_coords[cell]
    axis = int(np.argmax(np.ptp(g, axis=0)))
    order = np.argsort(g[:, axis], kind="stable")
    half = len(cell) // 2
    return _split(domain, np.sort(cell[order[:half]]), cap) + _split(
        domain, np.sort(cell[order[half:]]), cap
    )


def build_cover(
    domain: SampledDomain,
    r: float,
    diameter_cap: float = DEFAULT_DIAMETER_CAP
) -> Cover:
    """
    Partition the nodes into grid blocks of side r and expand each by r.

    Blocks whose diameter exceeds ``diameter_cap * r`` are bisected along
    their longer grid axis until they fit (or are single nodes).

    Args:
        domain: Sampled domain
        r: Cover radius
        diameter_cap: Largest admissible cell diameter in units of r

    Returns:
        Cover with observed overlap_N and diameter_K
    """
    if not r > 0:
        raise CoverError(f"cover radius must be positive, got {r}")
    n = len(domain)
    warnings: List[str] = []
    if r < domain.resolution:
        warnings.append(
            f"r={r:g} is below the grid resolution {domain.resolution:g}; cells are single nodes"
        )
        logger.warning(warnings[-1])

    if r >= 2.0 * domain.truncation_radius:
        cells = [np.arange(n)]
    else:
        groups: Dict[Tuple[int, int], List[int]] = {}
        for i, key in enumerate(_block_keys(domain, r)):
            groups.setdefault(key, []).append(i)
        cells = []
        for key in sorted(groups):
            cells.extend(_split(domain, np.asarray(groups[key]), diameter_cap * r))

    dist = domain.distances
    expansions = []
    for cell in cells:
        reach = dist[:, cell].min(axis=1)
        expansions.append(np.flatnonzero(reach <= r + 1e-12))

    counts = np.zeros(n, dtype=int)
    for g in expansions:
        counts[g] += 1
    overlap = int(counts.max())
    diameter_k = max(cell_diameter(domain, c) for c in cells) / r

    cover = Cover(r=float(r), cells=cells, expansions=expansions,
                  overlap_N=overlap, diameter_K=float(diameter_k), warnings=warnings)
    logger.debug("cover r=%g: %d cells, N=%d, K=%.3f", r, len(cells), overlap, diameter_k)
    return cover


def verify_cover(cover: Cover, domain: SampledDomain) -> CoverCheck:
    """Recompute overlap, largest cell diameter and the partition property."""
    n = len(domain)
    seen = np.zeros(n, dtype=int)
    for cell in cover.cells:
        np.add.at(seen, np.asarray(cell, dtype=int), 1)
    is_partition = bool(np.all(seen == 1))

    counts = np.zeros(n, dtype=int)
    for g in cover.expansions:
        np.add.at(counts, np.asarray(g, dtype=int), 1)
    max_diameter = max(cell_diameter(domain, np.asarray(c, dtype=int)) for c in cover.cells)
    return CoverCheck(
        max_overlap=int(counts.max()),
        max_cell_diameter=float(max_diameter),
        is_partition=is_partition,
    )
