"""Inner-layer constrained least squares: sum-to-one reconstruction weights.

Each point is expressed as an affine combination of its neighbors by
minimizing the norm of the weighted difference vectors plus an L2
penalty.  The penalty is scaled relative to the Gram trace so behavior
is consistent across datasets of different magnitudes.
"""

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from .core import DataMatrix, NeighborIndex, SingularSystem

# Below this, an inner weight counts as zero for the hierarchic solvers.
ZERO_WEIGHT = 1e-12


def solve_local(center: np.ndarray, neighbors: np.ndarray, sigma_reg: float) -> np.ndarray:
    """Sum-to-one weights reconstructing `center` from `neighbors`.

    Minimizes ||sum_j w_j (center - neighbor_j)||^2 + sigma ||w||^2
    subject to sum(w) = 1, where sigma = sigma_reg * trace(Gram)/m for a
    nonzero Gram trace and sigma_reg otherwise.

    Parameters
    ----------
    center : ndarray of shape (D,)
    neighbors : ndarray of shape (m, D)
        One neighbor per row; m >= 1.  Duplicates and copies of the
        center itself are allowed.
    sigma_reg : float
        Relative regularization scale, >= 0.

    Returns
    -------
    ndarray of shape (m,)
        Weights summing to 1.

    Raises
    ------
    SingularSystem
        If the regularized system still cannot be solved; only reachable
        at sigma_reg = 0.
    """
    neighbors = np.asarray(neighbors, dtype=np.float64)
    m = neighbors.shape[0]
    diff = center - neighbors
    gram = diff @ diff.T
    trace = np.trace(gram)
    sigma = sigma_reg * trace / m if trace > 0 else sigma_reg
    C = gram + sigma * np.eye(m)

    ones = np.ones(m)
    try:
        factor = cho_factor(C, lower=True, check_finite=False)
        w = cho_solve(factor, ones, check_finite=False)
        total = w.sum()
        if np.isfinite(total) and abs(total) > 1e-300 and np.isfinite(w).all():
            return w / total
    except LinAlgError:
        pass

    # Singular (or numerically indefinite) Gram: solve the bordered
    # stationarity system instead.  Its minimum-norm solution is the
    # constrained minimizer even when C has a null space, and reduces to
    # uniform weights for a fully degenerate neighborhood.
    kkt = np.zeros((m + 1, m + 1))
    kkt[:m, :m] = 2.0 * C
    kkt[:m, m] = 1.0
    kkt[m, :m] = 1.0
    rhs = np.zeros(m + 1)
    rhs[m] = 1.0
    sol = np.linalg.lstsq(kkt, rhs, rcond=None)[0]
    w = sol[:m]
    total = w.sum()
    if not np.isfinite(w).all() or abs(total - 1.0) > 1e-6:
        raise SingularSystem("local Gram system is singular and the constraint is unattainable")
    return w / total


def solve_inner(data: DataMatrix, idx: NeighborIndex, sigma_reg: float) -> np.ndarray:
    """Inner weights for every point, shape (n, k); each row sums to 1."""
    X = data.points
    weights = np.empty((data.n, idx.k))
    for i in range(data.n):
        try:
            weights[i] = solve_local(X[i], X[idx.inner[i]], sigma_reg)
        except SingularSystem as exc:
            raise SingularSystem(f"singular neighborhood system at point {i}", point=i) from exc
    return weights
