"""Domain types, configuration, and errors shared by all modules."""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

INNER_SUM_TOL = 1e-10
OUTER_SUM_TOL = 1e-10
JOINT_SUM_TOL = 1e-10


class Variant(Enum):
    """Weight-construction strategy driving the embedding pipeline."""

    LLE = "lle"
    IHNE = "ihne"
    RHNE = "rhne"
    BHNE = "bhne"

    @property
    def hierarchic(self) -> bool:
        return self is not Variant.LLE


class HneError(Exception):
    """Base class for all library errors."""


class KTooLarge(HneError):
    """Neighborhood size k exceeds what the dataset supports (k must be <= n-1)."""


class DTooLarge(HneError):
    """Target dimensionality d exceeds what the dataset supports (d < D and d < n)."""


class NonFinite(HneError):
    """Input data contains NaN or Inf entries."""


class SingularSystem(HneError):
    """A local Gram system stayed numerically singular even after regularization."""

    def __init__(self, message: str, point: int | None = None):
        super().__init__(message)
        self.point = point


class ConvergenceFailure(HneError):
    """The iterative eigensolver did not converge."""


class InconsistentDimensions(HneError):
    """Loaded rows (or images) do not share a common dimensionality."""


class DimensionMismatch(HneError):
    """Arrays passed to a metric do not agree on the number of points."""


class DegenerateSpectrumWarning(UserWarning):
    """The alignment matrix has more than one near-zero eigenvalue.

    Disconnected neighbor graphs cause this (each component contributes
    its own constant-like null vector), and so can very sparse sampling,
    where a smooth soft mode of the weight matrix reconstructs itself
    almost exactly.  Either way the affected coordinates carry little
    geometric information.
    """


@dataclass(frozen=True)
class DataMatrix:
    """High-dimensional input dataset, one point per row.

    Attributes
    ----------
    points : ndarray of shape (n, D)
        Dense real matrix; all entries must be finite.
    """

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 2:
            raise ValueError(f"points must be 2-D, got shape {pts.shape}")
        if pts.shape[0] < 1 or pts.shape[1] < 1:
            raise ValueError(f"need at least one point and one dimension, got {pts.shape}")
        if not np.isfinite(pts).all():
            raise NonFinite("data contains NaN or Inf entries")
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def D(self) -> int:
        return self.points.shape[1]


@dataclass(frozen=True)
class NeighborIndex:
    """Two-layer k-NN graph: direct neighbors plus neighbors-of-neighbors.

    Attributes
    ----------
    inner : ndarray of shape (n, k), int
        Row i lists the k nearest neighbors of point i, ascending by
        distance, never including i itself.
    outer : ndarray of shape (n, k, k), int
        Entry (i, l, j) is the j-th nearest neighbor of point inner[i, l];
        each outer list is exactly the inner list of that inner neighbor.
        Repetitions across outer lists are allowed, including i itself.
    k : int
        Neighborhood size, 1 <= k <= n-1.
    """

    inner: np.ndarray
    outer: np.ndarray
    k: int

    def __post_init__(self):
        inner = np.asarray(self.inner, dtype=np.intp)
        outer = np.asarray(self.outer, dtype=np.intp)
        n = inner.shape[0]
        if not (1 <= self.k <= n - 1):
            raise ValueError(f"k={self.k} outside [1, n-1] for n={n}")
        if inner.shape != (n, self.k):
            raise ValueError(f"inner shape {inner.shape} != ({n}, {self.k})")
        if outer.shape != (n, self.k, self.k):
            raise ValueError(f"outer shape {outer.shape} != ({n}, {self.k}, {self.k})")
        if (inner == np.arange(n)[:, None]).any():
            raise ValueError("inner neighbor lists must not contain the point itself")
        if not np.array_equal(outer, inner[inner]):
            raise ValueError("outer lists must equal the inner lists of the inner neighbors")
        object.__setattr__(self, "inner", inner)
        object.__setattr__(self, "outer", outer)

    @property
    def n(self) -> int:
        return self.inner.shape[0]


@dataclass(frozen=True)
class WeightSet:
    """Reconstruction weights for the inner layer and (optionally) the outer layer.

    Attributes
    ----------
    inner : ndarray of shape (n, k)
        Inner weights; every row sums to 1.
    outer : ndarray of shape (n, k, k), or None
        Outer weights per inner neighbor.  For IHNE/BHNE every outer row
        sums to 1; for RHNE the joint products inner*outer sum to 1 per
        point.  None for the plain-LLE variant.
    variant : Variant
        Which constraint regime the weights satisfy.
    guarded_blocks : ndarray of shape (n,), int, or None
        Per-point count of outer blocks that hit the near-zero inner
        weight guard during RHNE recovery; None when not applicable.
    """

    inner: np.ndarray
    outer: np.ndarray | None
    variant: Variant
    guarded_blocks: np.ndarray | None = None

    def __post_init__(self):
        inner = np.asarray(self.inner, dtype=np.float64)
        n, k = inner.shape
        err = np.abs(inner.sum(axis=1) - 1.0).max()
        if err > INNER_SUM_TOL:
            raise ValueError(f"inner weight rows must sum to 1 (max deviation {err:.3e})")
        object.__setattr__(self, "inner", inner)

        if self.variant is Variant.LLE:
            if self.outer is not None:
                raise ValueError("plain-LLE weights must not carry an outer layer")
            return

        outer = np.asarray(self.outer, dtype=np.float64)
        if outer.shape != (n, k, k):
            raise ValueError(f"outer shape {outer.shape} != ({n}, {k}, {k})")
        if self.variant is Variant.RHNE:
            joint = (inner[:, :, None] * outer).sum(axis=(1, 2))
            err = np.abs(joint - 1.0).max()
            if err > JOINT_SUM_TOL:
                raise ValueError(f"joint product-sums must equal 1 (max deviation {err:.3e})")
        else:
            err = np.abs(outer.sum(axis=2) - 1.0).max()
            if err > OUTER_SUM_TOL:
                raise ValueError(f"outer weight rows must sum to 1 (max deviation {err:.3e})")
        object.__setattr__(self, "outer", outer)

    @property
    def n(self) -> int:
        return self.inner.shape[0]

    @property
    def k(self) -> int:
        return self.inner.shape[1]


@dataclass(frozen=True)
class AlignmentMatrix:
    """Symmetric positive-semidefinite matrix whose bottom eigenvectors embed the data.

    G combines the inner-layer and hierarchic alignment terms with mixing
    coefficient gamma.  The all-ones vector is always in its null space.
    """

    G: object  # dense ndarray or scipy.sparse matrix, shape (n, n)
    gamma: float

    def __post_init__(self):
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError(f"gamma={self.gamma} outside [0, 1]")
        G = self.G
        if isinstance(G, np.ndarray):
            if not np.array_equal(G, G.T):
                raise ValueError("G must be exactly symmetric")
        else:
            if (G != G.T).nnz != 0:
                raise ValueError("G must be exactly symmetric")

    @property
    def n(self) -> int:
        return self.G.shape[0]


@dataclass(frozen=True)
class EmbeddingDiagnostics:
    """Numerical evidence attached to an embedding result.

    eigen_residuals / constant_overlap are per retained eigenpair; the
    per-point reconstruction residuals are measured in the original
    high-dimensional space and filled in by the pipeline.
    """

    eigen_residuals: np.ndarray
    constant_overlap: np.ndarray
    degenerate: bool = False
    inner_residuals: np.ndarray | None = None
    hier_residuals: np.ndarray | None = None
    null_vector_gap: float | None = None


@dataclass(frozen=True)
class EmbeddingResult:
    """Low-dimensional coordinates plus diagnostics.

    Attributes
    ----------
    Y : ndarray of shape (d, n)
        Row r holds the r-th embedding coordinate across all points.
        Rows are orthonormal (Y @ Y.T = I) and orthogonal to the
        all-ones vector.
    eigenvalues : ndarray of shape (d,)
        The d retained eigenvalues, ascending, with the near-zero
        constant-vector eigenvalue already discarded.
    diagnostics : EmbeddingDiagnostics
    """

    Y: np.ndarray
    eigenvalues: np.ndarray
    diagnostics: EmbeddingDiagnostics

    @property
    def d(self) -> int:
        return self.Y.shape[0]

    @property
    def n(self) -> int:
        return self.Y.shape[1]


@dataclass(frozen=True)
class EmbedConfig:
    """Parameters for one embedding run.

    sigma_reg scales the local regularizer relative to the neighborhood
    Gram trace; bhne_rotations is the number of refinement sweeps after
    the initialization sweep.
    """

    k: int
    d: int
    variant: Variant = Variant.LLE
    gamma: float = 1.0
    sigma_reg: float = 1e-3
    bhne_rotations: int = 2
    seed: int = 0

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k={self.k} must be >= 1")
        if self.d < 1:
            raise ValueError(f"d={self.d} must be >= 1")
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError(f"gamma={self.gamma} outside [0, 1]")
        if self.sigma_reg < 0.0:
            raise ValueError(f"sigma_reg={self.sigma_reg} must be >= 0")
        if self.bhne_rotations < 1:
            raise ValueError(f"bhne_rotations={self.bhne_rotations} must be >= 1")


def validate_config(cfg: EmbedConfig, data: DataMatrix) -> EmbedConfig:
    """Check a config against a concrete dataset and return it unchanged.

    Raises
    ------
    KTooLarge
        If k >= n.
    DTooLarge
        If d >= D or d >= n.
    NonFinite
        If the data contains NaN/Inf (normally already rejected at
        DataMatrix construction).
    """
    if not np.isfinite(data.points).all():
        raise NonFinite("data contains NaN or Inf entries")
    if cfg.k >= data.n:
        raise KTooLarge(f"k={cfg.k} needs at least {cfg.k + 1} points, got n={data.n}")
    if cfg.d >= data.D:
        raise DTooLarge(f"d={cfg.d} must be < ambient dimension D={data.D}")
    if cfg.d >= data.n:
        raise DTooLarge(f"d={cfg.d} must be < number of points n={data.n}")
    return cfg
