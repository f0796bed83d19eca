import numpy as np
import pytest

from hne import DataMatrix, KTooLarge, build_hierarchic, build_knn
from oracles import brute_knn


def test_collinear_tie_breaks_to_smaller_index():
    # point 1 is equidistant to 0 and 2; the tie goes to index 0
    data = DataMatrix(np.array([[0.0], [1.0], [2.0]]))
    inner = build_knn(data, 1)
    assert inner.tolist() == [[1], [0], [1]]


def test_unit_square_corners_prefer_edge_neighbors():
    corners = DataMatrix(np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]))
    inner = build_knn(corners, 2)
    for i in range(4):
        assert set(inner[i]) == {(i + 1) % 4, (i - 1) % 4}


def test_matches_exhaustive_sort_oracle(rng):
    for _ in range(10):
        n = int(rng.integers(8, 50))
        D = int(rng.integers(1, 6))
        k = int(rng.integers(1, min(n - 1, 7)))
        pts = rng.standard_normal((n, D))
        got = build_knn(DataMatrix(pts), k)
        assert np.array_equal(got, brute_knn(pts, k))


def test_duplicate_points_deterministic_ordering():
    # three copies of the origin plus one distant point: neighbor lists
    # among the duplicates are resolved purely by index
    data = DataMatrix(np.array([[0.0], [0.0], [0.0], [9.0]]))
    inner = build_knn(data, 2)
    assert inner.tolist() == [[1, 2], [0, 2], [0, 1], [0, 1]]


def test_outer_is_inner_of_inner(rng):
    data = DataMatrix(rng.standard_normal((30, 3)))
    idx = build_hierarchic(data, 4)
    for i in range(30):
        for l in range(4):
            assert np.array_equal(idx.outer[i, l], idx.inner[idx.inner[i, l]])


def test_mutual_pair_reappears_in_own_outer_layer():
    # 2-cycle: each of the two close points is the other's nearest
    # neighbor, so each sees itself in its outer layer
    data = DataMatrix(np.array([[0.0], [0.1], [5.0]]))
    idx = build_hierarchic(data, 1)
    assert idx.outer[0, 0, 0] == 0
    assert idx.outer[1, 0, 0] == 1


def test_k_bounds_raise():
    data = DataMatrix(np.zeros((5, 2)))
    with pytest.raises(ValueError):
        build_knn(data, 0)
    with pytest.raises(KTooLarge):
        build_knn(data, 5)


def test_deterministic_across_runs(rng):
    pts = rng.standard_normal((40, 3))
    a = build_hierarchic(DataMatrix(pts), 5)
    b = build_hierarchic(DataMatrix(pts.copy()), 5)
    assert np.array_equal(a.inner, b.inner)
    assert np.array_equal(a.outer, b.outer)
