"""Assembly of the global alignment matrix from local reconstruction weights.

Each point contributes one rank-1 term per layer.  The inner-layer term
uses the vector [-1, w_i1, ..., w_ik] scattered onto rows/columns
[i, inner neighbors of i]; the hierarchic term uses the length 1 + k^2
vector [-1, w_i1 * outer block 1, ..., w_ik * outer block k] scattered
onto [i, flattened outer neighbors].  Indices repeat freely (outer lists
overlap and may contain i itself) and repeated slots accumulate
additively.  The combined matrix is gamma * (inner part) + (outer part),
symmetric positive semidefinite, with the all-ones vector in its null
space whenever the weight constraints hold.
"""

import numpy as np
import scipy.sparse as sp

from .core import AlignmentMatrix, NeighborIndex, Variant, WeightSet

# Above this many points the matrix is accumulated in CSR form instead
# of dense, matching the iterative eigensolver path.
DENSE_MAX = 2000

# Cap on scatter entries materialized at once while accumulating.
_CHUNK_ENTRIES = 4_000_000


def build_alignment(idx: NeighborIndex, weights: WeightSet, gamma: float) -> AlignmentMatrix:
    """Assemble G = gamma * (inner term) + (hierarchic term).

    For plain-LLE weights only the inner term exists and gamma is forced
    to 1.  Dense ndarray up to DENSE_MAX points, sparse CSR above.
    """
    n, k = weights.inner.shape
    self_col = np.arange(n, dtype=np.intp)[:, None]
    neg_one = np.full((n, 1), -1.0)

    inner_ind = np.concatenate([self_col, idx.inner], axis=1)
    inner_val = np.concatenate([neg_one, weights.inner], axis=1)

    if weights.variant is Variant.LLE or weights.outer is None:
        gamma = 1.0
        G = _scatter_rank1(n, inner_ind, inner_val, 1.0)
    else:
        outer_ind = np.concatenate([self_col, idx.outer.reshape(n, k * k)], axis=1)
        joint = (weights.inner[:, :, None] * weights.outer).reshape(n, k * k)
        outer_val = np.concatenate([neg_one, joint], axis=1)
        G = _scatter_rank1(n, inner_ind, inner_val, gamma) + _scatter_rank1(
            n, outer_ind, outer_val, 1.0
        )

    # Scatter order can leave (r, c) and (c, r) a rounding step apart;
    # averaging restores exact symmetry.
    G = (G + G.T) * 0.5
    return AlignmentMatrix(G=G, gamma=gamma)


def _scatter_rank1(n: int, ind: np.ndarray, val: np.ndarray, scale: float):
    """Sum of scaled rank-1 terms val_i val_iᵀ scattered at ind_i x ind_i."""
    m = ind.shape[1]
    dense = n <= DENSE_MAX
    G = np.zeros((n, n)) if dense else sp.csr_matrix((n, n))
    step = max(1, _CHUNK_ENTRIES // (m * m))
    for start in range(0, n, step):
        ic = ind[start : start + step]
        vc = val[start : start + step]
        prods = scale * (vc[:, :, None] * vc[:, None, :])
        rows = np.broadcast_to(ic[:, :, None], prods.shape).ravel()
        cols = np.broadcast_to(ic[:, None, :], prods.shape).ravel()
        if dense:
            np.add.at(G, (rows, cols), prods.ravel())
        else:
            G = G + sp.coo_matrix((prods.ravel(), (rows, cols)), shape=(n, n)).tocsr()
    return G


def check_null_vector(matrix: AlignmentMatrix) -> float:
    """Max-magnitude entry of G @ ones.

    Near zero (<= 1e-8) whenever the weight sum constraints hold; a
    build-time diagnostic for catching constraint violations upstream.
    """
    ones = np.ones(matrix.n)
    product = np.asarray(matrix.G @ ones).ravel()
    return float(np.abs(product).max())


def to_coordinate_text(matrix: AlignmentMatrix) -> str:
    """Debug dump: one "row col value" line per stored entry, row-major."""
    G = matrix.G
    if isinstance(G, np.ndarray):
        rows, cols = np.nonzero(G)
        vals = G[rows, cols]
    else:
        coo = sp.coo_matrix(G)
        order = np.lexsort((coo.col, coo.row))
        rows, cols, vals = coo.row[order], coo.col[order], coo.data[order]
    lines = [f"{r} {c} {v:.17g}" for r, c, v in zip(rows, cols, vals)]
    return "\n".join(lines) + ("\n" if lines else "")
