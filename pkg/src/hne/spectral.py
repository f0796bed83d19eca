"""Embedding extraction from the alignment matrix.

The embedding minimizes tr(Y G Yᵀ) subject to Y Yᵀ = I, so its rows are
the eigenvectors of the d+1 algebraically smallest eigenvalues of G with
the near-zero constant-vector pair discarded.  Coordinates keep unit
norm; there is no sqrt(n) rescale.
"""

import warnings

import numpy as np
import scipy.linalg
import scipy.sparse as sp
from scipy.sparse.linalg import ArpackNoConvergence, eigsh

from .core import (
    AlignmentMatrix,
    ConvergenceFailure,
    DegenerateSpectrumWarning,
    DTooLarge,
    EmbeddingDiagnostics,
    EmbeddingResult,
)

# Gap below which the first retained eigenvalue is considered degenerate
# with the discarded one (disconnected neighbor graph).
DEGENERATE_GAP = 1e-10


def embed(matrix: AlignmentMatrix, d: int) -> EmbeddingResult:
    """Extract a d-dimensional embedding from the alignment matrix.

    Computes the d+1 smallest eigenpairs of symmetric G, drops the
    smallest (its eigenvector is the constant vector), and returns the
    remaining eigenvectors as rows of Y, eigenvalues ascending.  Each
    row's largest-magnitude entry is flipped positive (first such entry
    on ties) so results are reproducible across solvers.

    Raises ConvergenceFailure when the iterative solver gives up;
    warns DegenerateSpectrumWarning when the retained spectrum starts
    within DEGENERATE_GAP of the discarded eigenvalue, which happens
    when the neighbor graph is disconnected.
    """
    G = matrix.G
    n = matrix.n
    if d < 1:
        raise ValueError(f"d={d} must be >= 1")
    if d > n - 1:
        raise DTooLarge(f"d={d} exceeds n-1={n - 1} available non-constant directions")

    vals, vecs = _smallest_eigenpairs(G, n, d + 1)

    degenerate = bool(vals[1] - vals[0] < DEGENERATE_GAP)
    if degenerate:
        warnings.warn(
            "second-smallest eigenvalue nearly ties the constant-vector "
            "eigenvalue; the neighbor graph is disconnected or too sparsely "
            "coupled, and the embedding may collapse",
            DegenerateSpectrumWarning,
            stacklevel=2,
        )

    Y = vecs[:, 1 : d + 1].T.copy()
    eigenvalues = vals[1 : d + 1].copy()
    for r in range(d):
        peak = int(np.argmax(np.abs(Y[r])))
        if Y[r, peak] < 0:
            Y[r] = -Y[r]

    residuals = np.empty(d)
    overlap = np.empty(d)
    ones = np.ones(n)
    for r in range(d):
        residuals[r] = np.linalg.norm(np.asarray(G @ Y[r]).ravel() - eigenvalues[r] * Y[r])
        overlap[r] = abs(float(Y[r] @ ones))

    diagnostics = EmbeddingDiagnostics(
        eigen_residuals=residuals, constant_overlap=overlap, degenerate=degenerate
    )
    return EmbeddingResult(Y=Y, eigenvalues=eigenvalues, diagnostics=diagnostics)


def _smallest_eigenpairs(G, n: int, n_pairs: int):
    """Eigenpairs of the n_pairs smallest eigenvalues, ascending."""
    if isinstance(G, np.ndarray):
        return scipy.linalg.eigh(G, subset_by_index=(0, n_pairs - 1))
    if n_pairs >= n:  # iterative solvers need strictly fewer pairs than n
        return scipy.linalg.eigh(G.toarray(), subset_by_index=(0, n_pairs - 1))
    v0 = np.random.default_rng(0).standard_normal(n)
    try:
        vals, vecs = eigsh(G.tocsc(), k=n_pairs, sigma=0.0, which="LM", v0=v0)
    except ArpackNoConvergence as exc:
        raise ConvergenceFailure(
            f"iterative eigensolver did not converge for {n_pairs} smallest eigenpairs"
        ) from exc
    except RuntimeError:
        # Shift-invert factorization hit an exactly singular matrix;
        # nudge the shift off zero and retry once.
        try:
            vals, vecs = eigsh(G.tocsc(), k=n_pairs, sigma=-1e-6, which="LM", v0=v0)
        except ArpackNoConvergence as exc:
            raise ConvergenceFailure(
                f"iterative eigensolver did not converge for {n_pairs} smallest eigenpairs"
            ) from exc
    order = np.argsort(vals)
    return vals[order], vecs[:, order]
