"""Metric measure spaces, sampling grids and covers."""

from .covers import Cover, CoverCheck, build_cover, verify_cover
from .grids import SampledDomain, ball_measure_sup, line_domain, sample_grid
from .spaces import (
    AffineGroup,
    BergmanDisc,
    Euclidean2D,
    MetricMeasureSpace,
    Point,
    SpaceTag,
    distance,
    measure_weight,
    space_for,
)

__all__ = [
    "AffineGroup",
    "BergmanDisc",
    "Cover",
    "CoverCheck",
    "Euclidean2D",
    "MetricMeasureSpace",
    "Point",
    "SampledDomain",
    "SpaceTag",
    "ball_measure_sup",
    "build_cover",
    "distance",
    "line_domain",
    "measure_weight",
    "sample_grid",
    "space_for",
    "verify_cover",
]
