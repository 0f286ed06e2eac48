"""Binary likelihood-ratio classification from two density models."""
from dataclasses import dataclass, replace

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_is_fitted

from greenkde.density import DensityModel, estimate_batch, fit_model
from greenkde.knn import knn_density
from greenkde.neighbors import NeighborIndex, check_sample
from greenkde.solver import FitConfig

DEFAULT_EPSILON = 1e-12


@dataclass(frozen=True, eq=False)
class LikelihoodModel:
    signal: DensityModel
    background: DensityModel
    epsilon: float = DEFAULT_EPSILON

    def __post_init__(self):
        if self.signal.dim != self.background.dim:
            raise ValueError(
                f"signal ({self.signal.dim}-D) and background ({self.background.dim}-D) dimensions differ"
            )
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")

    @property
    def dim(self):
        return self.signal.dim


def likelihood_response(s, b, epsilon=DEFAULT_EPSILON):
    """``(s + eps) / (s + b + 2 eps)``; exactly 1/2 where both densities vanish."""
    s = np.asarray(s, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    return (s + epsilon) / (s + b + 2.0 * epsilon)


def train(signal, background, cfg=None, n_large_eval=None, epsilon=DEFAULT_EPSILON):
    """Fit independent density models to the two classes.

    The background fit uses seed ``cfg.seed + 1``.
    """
    cfg = cfg if cfg is not None else FitConfig()
    signal = check_sample(signal)
    background = check_sample(background)
    if signal.shape[1] != background.shape[1]:
        raise ValueError(f"signal is {signal.shape[1]}-D but background is {background.shape[1]}-D")
    s = fit_model(signal, cfg, n_large_eval)
    b = fit_model(background, replace(cfg, seed=(cfg.seed + 1) % 2**64), n_large_eval)
    return LikelihoodModel(s, b, epsilon)


def response(model, X):
    """Likelihood-ratio response in (0, 1) for each row of ``X``."""
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if X.shape[0] == 0:
        return np.zeros(0)
    return likelihood_response(estimate_batch(model.signal, X), estimate_batch(model.background, X), model.epsilon)


def knn_response(signal, background, X, k, epsilon=DEFAULT_EPSILON):
    """Same ratio built from two flat-kernel k-NN densities."""
    s = knn_density(signal if isinstance(signal, NeighborIndex) else NeighborIndex(signal), X, k)
    b = knn_density(background if isinstance(background, NeighborIndex) else NeighborIndex(background), X, k)
    return likelihood_response(s, b, epsilon)


def response_histogram(responses, n_bins=50):
    """Counts of responses in ``n_bins`` uniform bins over [0, 1].

    Returns ``(counts, edges)``; a response of exactly 1 lands in the last bin.
    """
    if n_bins < 1:
        raise ValueError("n_bins must be >= 1")
    r = np.asarray(responses, dtype=np.float64)
    edges = np.linspace(0.0, 1.0, n_bins + 1)
    b = np.clip((r * n_bins).astype(np.int64), 0, n_bins - 1)
    return np.bincount(b, minlength=n_bins), edges


def ks_distance(h1, h2):
    """Largest gap between the normalised cumulative distributions of two histograms."""
    h1 = np.asarray(h1, dtype=np.float64)
    h2 = np.asarray(h2, dtype=np.float64)
    if h1.shape != h2.shape:
        raise ValueError(f"histograms have different binning: {h1.shape} vs {h2.shape}")
    if h1.sum() <= 0 or h2.sum() <= 0:
        raise ValueError("histograms must be non-empty")
    c1 = np.cumsum(h1) / h1.sum()
    c2 = np.cumsum(h2) / h2.sum()
    return float(np.max(np.abs(c1 - c2)))


class GreenLikelihoodClassifier(ClassifierMixin, BaseEstimator):
    """Binary classifier scoring ``s(x) / (s(x) + b(x))`` from two Green's density fits.

    ``y == 1`` marks signal.  ``predict_proba`` columns follow ``classes_``.
    """

    def __init__(
        self,
        n_large=20,
        n_large_eval=None,
        step_cap=0.1,
        tol=1e-3,
        max_iter=2000,
        restarts=3,
        random_state=0,
        epsilon=DEFAULT_EPSILON,
    ):
        self.n_large = n_large
        self.n_large_eval = n_large_eval
        self.step_cap = step_cap
        self.tol = tol
        self.max_iter = max_iter
        self.restarts = restarts
        self.random_state = random_state
        self.epsilon = epsilon

    def fit(self, X, y):
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y)
        self.classes_ = np.unique(y)
        if self.classes_.shape[0] != 2:
            raise ValueError(f"need exactly two classes, got {self.classes_.tolist()}")
        cfg = FitConfig(
            n_large_fit=self.n_large,
            step_cap=self.step_cap,
            tolerance=self.tol,
            max_iterations=self.max_iter,
            restarts=self.restarts,
            seed=self.random_state,
        )
        self.model_ = train(
            X[y == self.classes_[1]], X[y == self.classes_[0]], cfg, self.n_large_eval, self.epsilon
        )
        self.n_features_in_ = X.shape[1]
        return self

    def decision_function(self, X):
        check_is_fitted(self, "model_")
        return response(self.model_, X)

    def predict_proba(self, X):
        r = self.decision_function(X)
        return np.column_stack([1.0 - r, r])

    def predict(self, X):
        return self.classes_[(self.decision_function(X) > 0.5).astype(int)]
