"""Genuinely multipartite entangled states from isometric extensions of smaller seeds."""

__version__ = "0.1.0"

from .core import (
    ArgumentError,
    Bipartition,
    CapacityError,
    DensityOperator,
    GmeForgeError,
    NumericsError,
    PartitionSpec,
    PartyLayout,
    StateVector,
    enumerate_union_bipartitions,
    min_eigenvalue_hermitian,
    partial_trace,
    partial_transpose,
    schmidt_decomposition,
    tensor_compose,
)
from .subspace import (
    SubspaceBasis,
    SubspaceKind,
    antisymmetric_projector,
    dicke_state,
    ges_basis,
    sample_subspace_vector,
    support_residual,
    symmetric_projector,
)
from .extend import (
    ImageKind,
    IsometryMap,
    apply_extension,
    copy_isometry,
    dicke_isometry,
    extend_vector,
    ges_isometry,
    identity_isometry,
    w_isometry,
)
from .certify import (
    Certificate,
    ThresholdReport,
    Verdict,
    certify_gme_bipartite,
    certify_gme_multipartition,
    classification_window,
    pure_gme_check,
    steering_transfer,
)
from .thresholds import p_gm, p_gm_tilde, p_sep_threshold, theta, theta_dicke

__all__ = [
    "# noqa: E402",
    "antisymmetric_projector",
    "apply_extension",
    "ArgumentError",
    "Bipartition",
    "CapacityError",
    "Certificate",
    "certify_gme_bipartite",
    "certify_gme_multipartition",
    "classification_window",
    "copy_isometry",
    "DensityOperator",
    "dicke_isometry",
    "dicke_state",
    "enumerate_union_bipartitions",
    "extend_vector",
    "ges_basis",
    "ges_isometry",
    "GmeForgeError",
    "identity_isometry",
    "ImageKind",
    "IsometryMap",
    "min_eigenvalue_hermitian",
    "NumericsError",
    "p_gm",
    "p_gm_tilde",
    "p_sep_threshold",
    "partial_trace",
    "partial_transpose",
    "PartitionSpec",
    "PartyLayout",
    "pure_gme_check",
    "sample_subspace_vector",
    "schmidt_decomposition",
    "StateVector",
    "steering_transfer",
    "SubspaceBasis",
    "SubspaceKind",
    "support_residual",
    "symmetric_projector",
    "tensor_compose",
    "theta",
    "theta_dicke",
    "ThresholdReport",
    "Verdict",
    "w_isometry",
]
