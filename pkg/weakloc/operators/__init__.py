"""Weakly localized operators: multipliers, decomposition, bounds and compactness."""

from .berezin import BerezinVerdict, berezin_compactness_test, berezin_profile
from .bundle import OperatorBundle, decode_action, encode_action, export_operator, import_operator
from .decomposition import approximant, approximant_mask, block_component, reconstruction
from .disc import (
    HankelResidual,
    PolarRule,
    hankel_berezin,
    hankel_gram,
    hankel_identity_residual,
    kernel_coefficients,
    polar_rule,
    radial_toeplitz_diagonal,
    toeplitz_matrix,
)
from .localized import (
    FrameContext,
    LocalizedOperator,
    Provenance,
    ProvenanceKind,
    adjoint,
    compose,
    custom_operator,
    identity_operator,
    scaled,
    zero_operator,
)
from .multipliers import berezin, frame_kernel, local_matrix, multiplier
from .norms import (
    DENSE_SVD_THRESHOLD,
    CompactnessMargin,
    NormBound,
    SingularValueProxy,
    compactness_margin,
    essential_norm_bound,
    norm_bound,
    operator_norm,
    operator_rho,
    singular_value_profile,
    singular_value_proxy,
)
from .symbols import Symbol, SymbolClass, parse_symbol
from .translations import translated_vectors, translation_operator

__all__ = [
    "BerezinVerdict",
    "CompactnessMargin",
    "DENSE_SVD_THRESHOLD",
    "FrameContext",
    "HankelResidual",
    "LocalizedOperator",
    "NormBound",
    "OperatorBundle",
    "PolarRule",
    "Provenance",
    "ProvenanceKind",
    "SingularValueProxy",
    "Symbol",
    "SymbolClass",
    "adjoint",
    "approximant",
    "approximant_mask",
    "berezin",
    "berezin_compactness_test",
    "berezin_profile",
    "block_component",
    "compactness_margin",
    "compose",
    "custom_operator",
    "decode_action",
    "encode_action",
    "essential_norm_bound",
    "export_operator",
    "frame_kernel",
    "hankel_berezin",
    "hankel_gram",
    "hankel_identity_residual",
    "identity_operator",
    "import_operator",
    "kernel_coefficients",
    "local_matrix",
    "multiplier",
    "norm_bound",
    "operator_norm",
    "operator_rho",
    "parse_symbol",
    "polar_rule",
    "radial_toeplitz_diagonal",
    "reconstruction",
    "scaled",
    "singular_value_profile",
    "singular_value_proxy",
    "toeplitz_matrix",
    "translated_vectors",
    "translation_operator",
    "zero_operator",
]
