"""Reconstruction-error benchmarking and embedding-quality scores."""

import numpy as np
from scipy.spatial.distance import cdist

from .core import DimensionMismatch, EmbeddingResult, Variant, WeightSet
from .hne_weights import hierarchic_residuals


def avg_reconstruction_error(data, idx, weights: WeightSet) -> float:
    """Mean Euclidean reconstruction residual over all points.

    Plain-LLE weights are scored by the inner-layer residual; the
    hierarchic variants by the two-layer residual (inner weights applied
    to the outer blocks' reconstructions).  Residuals are unsquared L2
    norms, so values are comparable across dimensionalities.
    """
    inner_res, hier_res = hierarchic_residuals(data, idx, weights)
    if weights.variant is Variant.LLE:
        return float(inner_res.mean())
    return float(hier_res.mean())


def embedding_quality(Y, intrinsic: np.ndarray, k_eval: int) -> dict[str, float]:
    """Rank-based agreement between an embedding and ground-truth coordinates.

    Parameters
    ----------
    Y : EmbeddingResult or ndarray of shape (n, d)
        The embedding to score; a result object is transposed into
        point-per-row form.
    intrinsic : ndarray of shape (n, m)
        Ground-truth coordinates (for instance the swiss roll's (t, h)).
    k_eval : int
        Neighborhood size used by all three scores; must be < n/2.

    Returns
    -------
    dict with keys "trustworthiness", "continuity", "knn_preservation",
    each in [0, 1] with 1 meaning perfect neighborhood agreement.
    """
    if isinstance(Y, EmbeddingResult):
        emb = Y.Y.T
    else:
        emb = np.asarray(Y, dtype=np.float64)
        if emb.ndim != 2:
            raise ValueError(f"embedding must be 2-D, got shape {emb.shape}")
    ref = np.asarray(intrinsic, dtype=np.float64)
    if ref.ndim != 2:
        raise ValueError(f"intrinsic coordinates must be 2-D, got shape {ref.shape}")
    n = ref.shape[0]
    if emb.shape[0] != n:
        raise DimensionMismatch(
            f"embedding has {emb.shape[0]} points but intrinsic coordinates have {n}"
        )
    if not 1 <= k_eval < n / 2:
        raise ValueError(f"k_eval={k_eval} must be in [1, n/2) for n={n}")

    order_ref = _neighbor_order(ref)
    order_emb = _neighbor_order(emb)
    rank_ref = _invert(order_ref)
    rank_emb = _invert(order_emb)

    # Penalize intruders: points inside the k-NN of one space ranked far
    # away in the other.  Ranks count from 1 at the nearest neighbor.
    trust = _rank_score(order_emb[:, 1 : k_eval + 1], rank_ref, n, k_eval)
    cont = _rank_score(order_ref[:, 1 : k_eval + 1], rank_emb, n, k_eval)

    knn_ref = order_ref[:, 1 : k_eval + 1]
    knn_emb = order_emb[:, 1 : k_eval + 1]
    shared = np.empty(n)
    for i in range(n):
        shared[i] = np.intersect1d(knn_ref[i], knn_emb[i]).size
    preservation = float(shared.mean() / k_eval)

    return {"trustworthiness": trust, "continuity": cont, "knn_preservation": preservation}


def _neighbor_order(points: np.ndarray) -> np.ndarray:
    """Row i: all point indices sorted by distance from i, self first.

    Distance ties break toward the smaller index so the ordering is
    deterministic.
    """
    d = cdist(points, points)
    np.fill_diagonal(d, -1.0)  # self sorts first even among duplicates
    n = d.shape[0]
    cols = np.broadcast_to(np.arange(n), (n, n))
    return np.lexsort((cols, d), axis=1)


def _invert(order: np.ndarray) -> np.ndarray:
    """rank[i, j] = position of point j in row i's ordering (self = 0)."""
    n = order.shape[0]
    rank = np.empty((n, n), dtype=np.intp)
    rows = np.arange(n)[:, None]
    rank[rows, order] = np.arange(n)[None, :]
    return rank


def _rank_score(picked: np.ndarray, rank_other: np.ndarray, n: int, k: int) -> float:
    """Shared trustworthiness/continuity formula.

    picked holds each point's k nearest neighbors in one space;
    rank_other the full rank table of the other space.  Neighbors whose
    rank in the other space exceeds k contribute (rank - k) penalty.
    """
    rows = np.arange(n)[:, None]
    ranks = rank_other[rows, picked] - k
    penalty = float(ranks[ranks > 0].sum())
    return 1.0 - penalty * 2.0 / (n * k * (2.0 * n - 3.0 * k - 1.0))
