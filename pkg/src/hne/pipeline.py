"""End-to-end composition: data -> neighbors -> weights -> alignment -> embedding."""

import dataclasses

from .alignment import build_alignment, check_null_vector
from .core import DataMatrix, EmbedConfig, EmbeddingResult, NeighborIndex, Variant, WeightSet, validate_config
from .hne_weights import hierarchic_residuals, solve_bhne, solve_ihne, solve_rhne
from .lle_weights import solve_inner
from .neighbors import build_hierarchic
from .spectral import embed


def build_weights(data: DataMatrix, idx: NeighborIndex, cfg: EmbedConfig) -> WeightSet:
    """Inner weights plus the variant's outer weights, as one WeightSet."""
    inner = solve_inner(data, idx, cfg.sigma_reg)
    if cfg.variant is Variant.LLE:
        return WeightSet(inner=inner, outer=None, variant=Variant.LLE)
    if cfg.variant is Variant.IHNE:
        return solve_ihne(data, idx, inner, cfg.sigma_reg)
    if cfg.variant is Variant.RHNE:
        return solve_rhne(data, idx, inner, cfg.sigma_reg)
    if cfg.variant is Variant.BHNE:
        return solve_bhne(data, idx, inner, cfg.sigma_reg, rotations=cfg.bhne_rotations)
    raise ValueError(f"unknown variant {cfg.variant!r}")


def embed_data(data: DataMatrix, cfg: EmbedConfig, return_intermediates: bool = False):
    """Run the whole pipeline and return an EmbeddingResult.

    Diagnostics carry the per-point reconstruction residuals measured in
    the original space and the null-vector gap of the assembled matrix.
    With return_intermediates, also returns a dict holding the neighbor
    index, weight set, and alignment matrix.
    """
    validate_config(cfg, data)
    idx = build_hierarchic(data, cfg.k)
    weights = build_weights(data, idx, cfg)
    matrix = build_alignment(idx, weights, cfg.gamma)
    gap = check_null_vector(matrix)
    result = embed(matrix, cfg.d)
    inner_res, hier_res = hierarchic_residuals(data, idx, weights)
    diagnostics = dataclasses.replace(
        result.diagnostics,
        inner_residuals=inner_res,
        hier_residuals=hier_res,
        null_vector_gap=gap,
    )
    result = EmbeddingResult(
        Y=result.Y, eigenvalues=result.eigenvalues, diagnostics=diagnostics
    )
    if return_intermediates:
        return result, {"idx": idx, "weights": weights, "matrix": matrix}
    return result
