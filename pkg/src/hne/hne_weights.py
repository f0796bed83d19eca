"""Outer-layer weight solvers for the three hierarchic strategies.

All three reuse the same constrained local solver on difference vectors,
so every weight set is invariant to global translation and rotation of
the data.  They differ in which constraint the outer layer carries:

* invariance-prioritizing: every outer block independently sums to 1;
* reconstruction-prioritizing: the joint inner*outer products sum to 1,
  solved as one least-squares problem over all k^2 outer points;
* balanced: outer blocks sum to 1 and are refined by cyclic
  block-coordinate sweeps against the full hierarchic objective.
"""

import numpy as np

from .core import DataMatrix, NeighborIndex, Variant, WeightSet
from .lle_weights import ZERO_WEIGHT, SingularSystem, solve_local


def solve_ihne(
    data: DataMatrix, idx: NeighborIndex, inner: np.ndarray, sigma_reg: float
) -> WeightSet:
    """Outer weights with an independent sum-to-one constraint per block.

    For each inner neighbor l of point i, the block solves the
    reconstruction of x_i from the outer neighborhood of l.  The inner
    weight scales the block objective but not its argmin, so it is
    dropped; blocks whose inner weight is numerically zero get uniform
    weights (any feasible vector is optimal there).
    """
    X = data.points
    n, k = inner.shape
    outer_w = np.empty((n, k, k))
    for i in range(n):
        for l in range(k):
            if abs(inner[i, l]) <= ZERO_WEIGHT:
                outer_w[i, l] = 1.0 / k
                continue
            try:
                outer_w[i, l] = solve_local(X[i], X[idx.outer[i, l]], sigma_reg)
            except SingularSystem as exc:
                raise SingularSystem(
                    f"singular outer system at point {i}, block {l}", point=i
                ) from exc
    return WeightSet(inner=inner, outer=outer_w, variant=Variant.IHNE)


def solve_rhne(
    data: DataMatrix, idx: NeighborIndex, inner: np.ndarray, sigma_reg: float
) -> WeightSet:
    """Outer weights recovered from one joint solve over all k^2 outer points.

    The joint weight vector reconstructs x_i directly from the flattened
    outer layer under a single sum-to-one constraint; the stored outer
    weights are the joint weights divided by the corresponding inner
    weight.  Blocks with a numerically zero inner weight cannot absorb
    their share of the joint mass: they fall back to uniform weights and
    the remaining blocks are rescaled so the joint product-sum stays 1.
    """
    X = data.points
    n, k = inner.shape
    outer_w = np.empty((n, k, k))
    guarded = np.zeros(n, dtype=np.intp)
    for i in range(n):
        flat_pts = X[idx.outer[i].reshape(k * k)]
        try:
            joint = solve_local(X[i], flat_pts, sigma_reg).reshape(k, k)
        except SingularSystem as exc:
            raise SingularSystem(f"singular joint system at point {i}", point=i) from exc
        zero = np.abs(inner[i]) <= ZERO_WEIGHT
        if not zero.any():
            outer_w[i] = joint / inner[i][:, None]
            continue
        guarded[i] = int(zero.sum())
        block = np.where(zero[:, None], 1.0 / k, joint / np.where(zero, 1.0, inner[i])[:, None])
        total = float((inner[i][:, None] * block).sum())
        if abs(total) <= 1e-8:
            # Joint mass sat almost entirely on dead blocks; uniform outer
            # weights satisfy the joint constraint through the inner sum.
            block = np.full((k, k), 1.0 / k)
        else:
            block /= total
        outer_w[i] = block
    return WeightSet(
        inner=inner,
        outer=outer_w,
        variant=Variant.RHNE,
        guarded_blocks=guarded if guarded.any() else None,
    )


def solve_bhne(
    data: DataMatrix,
    idx: NeighborIndex,
    inner: np.ndarray,
    sigma_reg: float,
    rotations: int = 2,
    return_objectives: bool = False,
):
    """Outer weights refined by cyclic sweeps over the blocks.

    Per point, runs `rotations` + 1 sweeps over the k blocks.  The first
    sweep reconstructs against the plain inner-neighbor combination; the
    refinement sweeps replace each other inner neighbor by its current
    hierarchic reconstruction, always using the freshest weights
    (Gauss-Seidel within a point, points independent).  Each block solve
    is exact, so at sigma_reg = 0 the hierarchic objective cannot
    increase from one refinement sweep to the next.

    Parameters
    ----------
    rotations : int
        Number of refinement sweeps after the initialization sweep, >= 1.
    return_objectives : bool
        When True, also return an (n, rotations+1) array of the
        per-point hierarchic objective after each sweep.

    Returns
    -------
    WeightSet, or (WeightSet, ndarray) when return_objectives is set.
    """
    if rotations < 1:
        raise ValueError(f"rotations={rotations} must be >= 1")
    X = data.points
    n, k = inner.shape
    outer_w = np.empty((n, k, k))
    sweeps = rotations + 1
    objectives = np.empty((n, sweeps)) if return_objectives else None

    for i in range(n):
        x = X[i]
        w = inner[i]
        inner_pts = X[idx.inner[i]]
        outer_pts = X[idx.outer[i]]
        block = np.full((k, k), 1.0 / k)
        recon = outer_pts.mean(axis=1)  # uniform-weight reconstructions

        inner_total = w @ inner_pts
        for l in range(k):
            if abs(w[l]) <= ZERO_WEIGHT:
                continue
            target = x - (inner_total - w[l] * inner_pts[l])
            block[l] = _block_solve(target / w[l], outer_pts[l], sigma_reg, i, l)
            recon[l] = block[l] @ outer_pts[l]
        full = w @ recon
        if return_objectives:
            objectives[i, 0] = float(((x - full) ** 2).sum())

        for sweep in range(1, sweeps):
            for l in range(k):
                if abs(w[l]) <= ZERO_WEIGHT:
                    continue
                target = x - (full - w[l] * recon[l])
                block[l] = _block_solve(target / w[l], outer_pts[l], sigma_reg, i, l)
                new_recon = block[l] @ outer_pts[l]
                full = full + w[l] * (new_recon - recon[l])
                recon[l] = new_recon
            full = w @ recon  # resync against incremental drift
            if return_objectives:
                objectives[i, sweep] = float(((x - full) ** 2).sum())
        outer_w[i] = block

    weights = WeightSet(inner=inner, outer=outer_w, variant=Variant.BHNE)
    if return_objectives:
        return weights, objectives
    return weights


def _block_solve(center, neighbors, sigma_reg, point, block):
    try:
        return solve_local(center, neighbors, sigma_reg)
    except SingularSystem as exc:
        raise SingularSystem(
            f"singular outer system at point {point}, block {block}", point=point
        ) from exc


def hierarchic_residuals(
    data: DataMatrix, idx: NeighborIndex, weights: WeightSet
) -> tuple[np.ndarray, np.ndarray]:
    """Per-point reconstruction residuals in the high-dimensional space.

    Returns
    -------
    (inner_residuals, hier_residuals)
        Euclidean norms of the inner-layer and hierarchic reconstruction
        errors; for plain-LLE weights the hierarchic residual equals the
        inner one.
    """
    X = data.points
    n, k = weights.inner.shape
    inner_res = np.empty(n)
    hier_res = np.empty(n)
    for i in range(n):
        x = X[i]
        w = weights.inner[i]
        inner_err = x - w @ X[idx.inner[i]]
        inner_res[i] = np.sqrt((inner_err**2).sum())
        if weights.outer is None:
            hier_res[i] = inner_res[i]
        else:
            outer_pts = X[idx.outer[i]]
            recon = np.einsum("lj,ljd->ld", weights.outer[i], outer_pts)
            hier_err = x - w @ recon
            hier_res[i] = np.sqrt((hier_err**2).sum())
    return inner_res, hier_res
