"""Flat-kernel k-nearest-neighbour density baseline."""
import math

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from greenkde.neighbors import NeighborIndex, check_sample


def ball_volume(dim, R):
    """Volume of an ``dim``-ball of radius ``R``."""
    if R < 0:
        raise ValueError("radius must be nonnegative")
    return math.pi ** (dim / 2) / math.gamma(dim / 2 + 1) * R**dim


def knn_density(index, X, k):
    """``k / (N V_n(R_k))`` at each query, ``R_k`` the k-th neighbour distance.

    A query that coincides with a sample point does not count itself.
    """
    if not isinstance(index, NeighborIndex):
        index = NeighborIndex(index)
    X = np.asarray(X, dtype=np.float64)
    single = X.ndim == 1
    R, _ = index.kth_neighbors(np.atleast_2d(X), k, exclude_self="auto")
    unit = math.pi ** (index.dim / 2) / math.gamma(index.dim / 2 + 1)
    g = k / (index.n_samples * unit * R**index.dim)
    return float(g[0]) if single else g


class KNNDensity(BaseEstimator):
    """Flat-kernel k-NN density estimator.

    ``k`` defaults to ``n_features * n_large`` so that its volume radius
    matches the exclusion radius of a :class:`~greenkde.GreenDensity` with
    the same ``n_large``.
    """

    def __init__(self, k=None, n_large=20):
        self.k = k
        self.n_large = n_large

    def fit(self, X, y=None):
        X = check_sample(X)
        self.index_ = NeighborIndex(X)
        self.n_features_in_ = X.shape[1]
        self.k_ = self.k if self.k is not None else X.shape[1] * self.n_large
        return self

    def density(self, X):
        check_is_fitted(self, "index_")
        return knn_density(self.index_, np.atleast_2d(X), self.k_)

    def score_samples(self, X):
        return np.log(self.density(X))
