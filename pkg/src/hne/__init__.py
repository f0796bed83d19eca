"""Locally linear and hierarchic-neighbors embeddings.

Reconstructs each point from one or two layers of nearest neighbors
under sum-to-one constraints, assembles the global alignment matrix,
and embeds via its bottom non-constant eigenvectors.  Three outer-layer
strategies are provided next to plain LLE, trading reconstruction
fidelity against per-block constraint structure.
"""

from .alignment import build_alignment, check_null_vector, to_coordinate_text
from .core import (
    AlignmentMatrix,
    ConvergenceFailure,
    DTooLarge,
    DataMatrix,
    DegenerateSpectrumWarning,
    DimensionMismatch,
    EmbedConfig,
    EmbeddingDiagnostics,
    EmbeddingResult,
    HneError,
    InconsistentDimensions,
    KTooLarge,
    NeighborIndex,
    NonFinite,
    SingularSystem,
    Variant,
    WeightSet,
    validate_config,
)
from .datasets import cluster_3d, load_matrix, swiss_roll, two_surfaces
from .hne_weights import hierarchic_residuals, solve_bhne, solve_ihne, solve_rhne
from .lle_weights import solve_inner, solve_local
from .metrics import avg_reconstruction_error, embedding_quality
from .neighbors import build_hierarchic, build_knn
from .pipeline import build_weights, embed_data
from .spectral import embed

__version__ = "0.1.0"

__all__ = [
    "AlignmentMatrix",
    "ConvergenceFailure",
    "DTooLarge",
    "DataMatrix",
    "DegenerateSpectrumWarning",
    "DimensionMismatch",
    "EmbedConfig",
    "EmbeddingDiagnostics",
    "EmbeddingResult",
    "HneError",
    "InconsistentDimensions",
    "KTooLarge",
    "NeighborIndex",
    "NonFinite",
    "SingularSystem",
    "Variant",
    "WeightSet",
    "avg_reconstruction_error",
    "build_alignment",
    "build_hierarchic",
    "build_knn",
    "build_weights",
    "check_null_vector",
    "cluster_3d",
    "embed",
    "embed_data",
    "embedding_quality",
    "hierarchic_residuals",
    "load_matrix",
    "solve_bhne",
    "solve_ihne",
    "solve_inner",
    "solve_local",
    "solve_rhne",
    "swiss_roll",
    "to_coordinate_text",
    "two_surfaces",
    "validate_config",
    "__version__",
]
