"""Hierarchic k-NN graph construction.

Neighborhoods are measured with the Euclidean metric, ties broken by the
smaller point index, so the graph is fully deterministic.  Distances are
computed per row from explicit difference vectors rather than a fused
matrix product; slower, but bitwise reproducible regardless of BLAS
threading.
"""

import numpy as np

from .core import DataMatrix, KTooLarge, NeighborIndex


def build_knn(data: DataMatrix, k: int) -> np.ndarray:
    """Indices of the k nearest neighbors of every point.

    Parameters
    ----------
    data : DataMatrix
    k : int
        Neighborhood size, 1 <= k <= n-1.

    Returns
    -------
    ndarray of shape (n, k), int
        Row i lists the k points closest to point i (excluding i),
        ascending by distance, equal distances resolved toward the
        smaller index.
    """
    X = data.points
    n = data.n
    if k < 1:
        raise ValueError(f"k={k} must be >= 1")
    if k > n - 1:
        raise KTooLarge(f"k={k} must be <= n-1 = {n - 1}")

    inner = np.empty((n, k), dtype=np.intp)
    order = np.arange(n)
    for i in range(n):
        diff = X - X[i]
        d2 = np.einsum("nd,nd->n", diff, diff)
        d2[i] = np.inf
        inner[i] = np.lexsort((order, d2))[:k]
    return inner


def build_hierarchic(data: DataMatrix, k: int) -> NeighborIndex:
    """Build the full two-layer neighbor graph.

    The outer layer is the inner lists of the inner neighbors, kept
    verbatim: repeated points are preserved, and a point may reappear in
    its own outer layer.
    """
    inner = build_knn(data, k)
    outer = inner[inner]
    return NeighborIndex(inner=inner, outer=outer, k=k)
