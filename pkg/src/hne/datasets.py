"""Synthetic manifold generators and loaders for external data.

The generators are pure functions of their parameters and seed.  Swiss
rolls come with their intrinsic 2-D coordinates so embeddings can be
scored against ground truth; the clustered and two-surface sets carry
integer labels (-1 marks bridge points joining the pieces).
"""

from pathlib import Path

import numpy as np

from .core import DataMatrix, InconsistentDimensions

SWISS_T_RANGE = (1.5 * np.pi, 4.5 * np.pi)
SWISS_H_RANGE = (0.0, 21.0)
# Centered rectangle removed in the holed variant, in intrinsic (t, h).
HOLE_T_RANGE = (2.5 * np.pi, 3.5 * np.pi)
HOLE_H_RANGE = (7.0, 14.0)

# Zigzag of blob centers for the clustered set; consecutive centers
# alternate out of plane so the cloud is genuinely 3-D.
CLUSTER_CENTERS = np.array(
    [
        [0.0, 0.0, 0.0],
        [4.0, 3.0, 0.0],
        [8.0, 0.0, 3.0],
        [12.0, 3.0, 0.0],
        [16.0, 0.0, 3.0],
    ]
)

# Two offset square patches plus the segment bridging them.
PLANE_A = {"x": (0.0, 4.0), "y": (0.0, 4.0), "z": 0.0}
PLANE_B = {"x": (6.0, 10.0), "y": (0.0, 4.0), "z": 2.0}
BRIDGE_ENDS = (np.array([4.0, 2.0, 0.0]), np.array([6.0, 2.0, 2.0]))


def swiss_roll(n: int, seed: int, hole: bool = False):
    """Sample a swiss roll, optionally with a rectangular hole.

    Points are (t cos t, h, t sin t) for t uniform on SWISS_T_RANGE and
    h uniform on SWISS_H_RANGE.  With `hole`, draws falling in the
    excluded intrinsic rectangle are rejected and redrawn until exactly
    n points remain.

    Returns (DataMatrix of shape (n, 3), intrinsic coordinates (n, 2)).
    """
    if n < 10:
        raise ValueError(f"n={n} must be >= 10")
    rng = np.random.default_rng(seed)
    ts = np.empty(0)
    hs = np.empty(0)
    while ts.size < n:
        need = n - ts.size
        t = rng.uniform(*SWISS_T_RANGE, size=need)
        h = rng.uniform(*SWISS_H_RANGE, size=need)
        if hole:
            inside = (
                (t >= HOLE_T_RANGE[0])
                & (t <= HOLE_T_RANGE[1])
                & (h >= HOLE_H_RANGE[0])
                & (h <= HOLE_H_RANGE[1])
            )
            t, h = t[~inside], h[~inside]
        ts = np.concatenate([ts, t])
        hs = np.concatenate([hs, h])
    ts, hs = ts[:n], hs[:n]
    points = np.column_stack([ts * np.cos(ts), hs, ts * np.sin(ts)])
    intrinsic = np.column_stack([ts, hs])
    return DataMatrix(points), intrinsic


def cluster_3d(n_per_cluster: int, bridge_points: int = 9, seed: int = 0):
    """Five Gaussian blobs on a 3-D zigzag, chained by bridge points.

    Each of the 4 segments between consecutive centers carries
    `bridge_points` equispaced interior points.  Blob spread is 0.1 of
    the mean center-to-center distance.  Labels are 0..4 for blob
    membership and -1 for bridge points; blobs come first in row order.
    """
    if n_per_cluster < 2:
        raise ValueError(f"n_per_cluster={n_per_cluster} must be >= 2")
    if bridge_points < 1:
        raise ValueError(f"bridge_points={bridge_points} must be >= 1")
    rng = np.random.default_rng(seed)
    hops = np.diff(CLUSTER_CENTERS, axis=0)
    spread = 0.1 * np.linalg.norm(hops, axis=1).mean()

    blocks = []
    labels = []
    for c, center in enumerate(CLUSTER_CENTERS):
        blocks.append(center + spread * rng.standard_normal((n_per_cluster, 3)))
        labels.extend([c] * n_per_cluster)
    fractions = np.arange(1, bridge_points + 1) / (bridge_points + 1)
    for start, hop in zip(CLUSTER_CENTERS[:-1], hops):
        blocks.append(start + fractions[:, None] * hop)
        labels.extend([-1] * bridge_points)
    return DataMatrix(np.concatenate(blocks)), np.array(labels, dtype=np.intp)


def two_surfaces(n: int, bridge_points: int = 9, seed: int = 0):
    """Two parallel-offset square patches joined by a straight bridge.

    The n total points include the bridge: the remaining n - bridge_points
    split as evenly as possible between the two patches (patch A gets the
    extra point when odd).  Labels: 0 for patch A, 1 for patch B, -1 for
    bridge points.
    """
    if n < 20:
        raise ValueError(f"n={n} must be >= 20")
    if bridge_points < 1:
        raise ValueError(f"bridge_points={bridge_points} must be >= 1")
    if n - bridge_points < 2:
        raise ValueError(f"n={n} leaves no room for surface points")
    rng = np.random.default_rng(seed)
    n_a = (n - bridge_points + 1) // 2
    n_b = (n - bridge_points) - n_a

    def patch(spec, count):
        x = rng.uniform(*spec["x"], size=count)
        y = rng.uniform(*spec["y"], size=count)
        return np.column_stack([x, y, np.full(count, spec["z"])])

    a = patch(PLANE_A, n_a)
    b = patch(PLANE_B, n_b)
    start, end = BRIDGE_ENDS
    fractions = np.arange(1, bridge_points + 1) / (bridge_points + 1)
    bridge = start + fractions[:, None] * (end - start)
    labels = np.concatenate(
        [np.zeros(n_a, dtype=np.intp), np.ones(n_b, dtype=np.intp), np.full(bridge_points, -1, dtype=np.intp)]
    )
    return DataMatrix(np.concatenate([a, b, bridge])), labels


def load_matrix(path, format: str | None = None) -> DataMatrix:
    """Load a data matrix from a CSV file or a directory of images.

    format is "csv" or "raw-image-dir"; left as None it is inferred from
    whether `path` is a directory.  CSV rows become points.  Images are
    read in lexicographic filename order and flattened row-major to one
    row each, single-channel for grayscale and interleaved RGB for
    color, with raw intensity values (no rescaling here).

    Raises InconsistentDimensions when rows or images disagree in size,
    OSError for unreadable paths.
    """
    path = Path(path)
    if format is None:
        format = "raw-image-dir" if path.is_dir() else "csv"
    if format == "csv":
        try:
            points = np.loadtxt(path, delimiter=",", ndmin=2)
        except ValueError as exc:
            raise InconsistentDimensions(f"ragged CSV rows in {path}: {exc}") from exc
        return DataMatrix(points)
    if format == "raw-image-dir":
        return _load_image_dir(path)
    raise ValueError(f"unknown format {format!r}; use 'csv' or 'raw-image-dir'")


def _load_image_dir(path: Path) -> DataMatrix:
    from PIL import Image

    files = sorted(p for p in path.iterdir() if p.is_file())
    if not files:
        raise OSError(f"no files found in directory {path}")
    rows = []
    shape = None
    for f in files:
        with Image.open(f) as img:
            arr = np.asarray(img, dtype=np.float64)
        if shape is None:
            shape = arr.shape
        elif arr.shape != shape:
            raise InconsistentDimensions(
                f"image {f.name} has shape {arr.shape}, expected {shape}"
            )
        rows.append(arr.reshape(-1))
    return DataMatrix(np.vstack(rows))
