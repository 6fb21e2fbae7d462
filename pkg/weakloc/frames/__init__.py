"""Frame families, sampled frames and their duals."""

from .duals import (
    DualFrame,
    canonical_dual,
    check_condition,
    parseval_dual,
    reconstruct,
    reconstruction_residual,
    tight_dual,
)
from .families import (
    BergmanKernelFamily,
    FamilyTag,
    FrameFamily,
    GaborGaussianFamily,
    HaarWaveletFamily,
    OrthonormalTestFamily,
    ScaledFamily,
    bergman_degree_for,
    bergman_tail,
    haar_admissibility_constant,
)
from .sampled import (
    FrameBounds,
    SampledFrame,
    TransformedFamily,
    analysis,
    bergman_disc_frame,
    frame_bounds,
    frame_operator,
    gabor_gaussian_frame,
    gabor_interior_subspace,
    haar_wavelet_frame,
    orthonormal_test_frame,
    realization_error,
    synthesis,
)

__all__ = [
    "BergmanKernelFamily",
    "DualFrame",
    "FamilyTag",
    "FrameBounds",
    "FrameFamily",
    "GaborGaussianFamily",
    "HaarWaveletFamily",
    "OrthonormalTestFamily",
    "SampledFrame",
    "ScaledFamily",
    "TransformedFamily",
    "analysis",
    "bergman_degree_for",
    "bergman_disc_frame",
    "bergman_tail",
    "canonical_dual",
    "check_condition",
    "frame_bounds",
    "frame_operator",
    "gabor_gaussian_frame",
    "gabor_interior_subspace",
    "haar_admissibility_constant",
    "haar_wavelet_frame",
    "orthonormal_test_frame",
    "parseval_dual",
    "realization_error",
    "reconstruct",
    "reconstruction_residual",
    "synthesis",
    "tight_dual",
]
