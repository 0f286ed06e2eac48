import math

import numpy as np
import pytest

from greenkde.knn import KNNDensity, ball_volume, knn_density
from greenkde.neighbors import NeighborIndex


@pytest.mark.parametrize(
    "n, R, expected",
    [(2, 1.0, math.pi), (3, 1.0, 4 * math.pi / 3), (2, 2.0, 4 * math.pi), (4, 0.0, 0.0)],
)
def test_ball_volume(n, R, expected):
    assert ball_volume(n, R) == pytest.approx(expected, rel=1e-14)


def test_ball_volume_rejects_negative():
    with pytest.raises(ValueError):
        ball_volume(2, -1.0)


def test_knn_arithmetic():
    rng = np.random.default_rng(0)
    near = np.column_stack([np.linspace(0.01, 0.09, 9), np.zeros(9)])
    tenth = np.array([[0.0, 0.1]])
    t = rng.uniform(0, 2 * math.pi, 990)
    far = np.column_stack([np.cos(t), np.sin(t)]) * rng.uniform(1, 5, (990, 1))
    X = np.vstack([near, tenth, far])
    g = knn_density(NeighborIndex(X), np.zeros(2), 10)
    assert g == pytest.approx(10 / (1000 * math.pi * 0.01), rel=1e-12)
    assert g == pytest.approx(0.31831, abs=1e-5)


def test_knn_uniform_square():
    rng = np.random.default_rng(4)
    X = rng.random((10_000, 2))
    k = math.ceil(math.sqrt(10_000))
    g = knn_density(X, rng.uniform(0.3, 0.7, (20, 2)), k)
    assert np.all(np.abs(g - 1.0) < 0.3)


def test_knn_matches_brute_force():
    rng = np.random.default_rng(5)
    X = rng.standard_normal((300, 3))
    Q = np.vstack([rng.standard_normal((10, 3)), X[:10]])
    idx = NeighborIndex(X)
    for q in Q:
        d = np.sort(np.sqrt(((X - q) ** 2).sum(axis=1)))
        if d[0] == 0.0:
            d = d[1:]
        ref = 12 / (300 * ball_volume(3, d[11]))
        assert knn_density(idx, q, 12) == pytest.approx(ref, rel=1e-14)


def test_matched_resolution(small_model):
    k = small_model.n_discr_eval
    Q = np.vstack([small_model.points[:20], np.random.default_rng(0).standard_normal((20, 2))])
    R_knn, _ = small_model.index.kth_neighbors(Q, k, exclude_self="auto")
    np.testing.assert_array_equal(R_knn, small_model.exclusion_radius(Q))
    g = knn_density(small_model.index, Q, k)
    np.testing.assert_allclose(g, k / (small_model.n_samples * math.pi * R_knn**2), rtol=1e-14)


def test_knn_estimator():
    X = np.random.default_rng(1).standard_normal((200, 2))
    est = KNNDensity(n_large=5).fit(X)
    assert est.k_ == 10
    assert KNNDensity(k=7).fit(X).k_ == 7
    np.testing.assert_array_equal(est.density(X[:3]), knn_density(X, X[:3], 10))
    with pytest.raises(ValueError):
        knn_density(X, X[:1], 200)
