"""Density estimates from a fitted dipole field."""
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from greenkde._loops import induced_field, sqdist_to
from greenkde.kernel import density_scale, kernel_prefactor
from greenkde.neighbors import NeighborIndex, check_sample
from greenkde.solver import FitConfig, FitReport, field_scale, fit


@dataclass(frozen=True, eq=False)
class DensityModel:
    """A sample, its fitted dipole field and the evaluation settings.

    ``contact_correction`` rescales the excluded-sphere sum by
    :func:`greenkde.kernel.density_scale` so that estimates integrate to one;
    with it off, :func:`estimate` returns the bare field magnitude.
    """

    points: np.ndarray
    phi: np.ndarray
    fit_config: FitConfig
    n_large_eval: int
    report: FitReport
    contact_correction: bool = True
    _index: NeighborIndex = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        points = check_sample(self.points)
        phi = np.ascontiguousarray(self.phi, dtype=np.float64)
        if phi.shape != points.shape:
            raise ValueError(f"field shape {phi.shape} does not match sample shape {points.shape}")
        if np.any(np.abs(np.linalg.norm(phi, axis=1) - 1.0) > 1e-9):
            raise ValueError("field rows must be unit vectors")
        if int(self.n_large_eval) != self.n_large_eval or self.n_large_eval < 1:
            raise ValueError(f"n_large_eval must be a positive integer, got {self.n_large_eval!r}")
        n_discr = points.shape[1] * self.n_large_eval
        if n_discr > points.shape[0] - 2:
            raise ValueError(
                f"n * n_large_eval = {n_discr} exceeds sample size minus two ({points.shape[0] - 2})"
            )
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "phi", phi)

    @property
    def dim(self):
        return self.points.shape[1]

    @property
    def n_samples(self):
        return self.points.shape[0]

    @property
    def n_discr_eval(self):
        return self.dim * self.n_large_eval

    @cached_property
    def index(self):
        return self._index if self._index is not None else NeighborIndex(self.points)

    def exclusion_radius(self, Q):
        """Distance to the ``n * n_large_eval``-th nearest sample point, skipping a coincident one."""
        d, _ = self.index.kth_neighbors(Q, self.n_discr_eval, exclude_self="auto")
        return d

    def field_at(self, Q):
        """Induced field at arbitrary query points, shape (m, n)."""
        Q = np.atleast_2d(np.asarray(Q, dtype=np.float64))
        if Q.shape[1] != self.dim:
            raise ValueError(f"query dimension {Q.shape[1]} does not match model dimension {self.dim}")
        if Q.shape[0] == 0:
            return np.zeros((0, self.dim))
        if not np.all(np.isfinite(Q)):
            raise ValueError("query points must be finite")
        _, nb = self.index.kth_neighbors(Q, self.n_discr_eval, exclude_self="auto")
        cutoff2 = sqdist_to(Q, self.points, nb)
        E = induced_field(Q, self.points, self.phi, cutoff2, kernel_prefactor(self.dim))
        return E * field_scale(self.n_samples, self.dim)


def estimate_batch(model, X):
    """Density estimate at each row of ``X``; order preserving."""
    X = np.asarray(X, dtype=np.float64)
    if X.size == 0:
        return np.zeros(0)
    g = np.linalg.norm(model.field_at(X), axis=1)
    if model.contact_correction:
        g *= density_scale(model.dim)
    return g


def estimate(model, x):
    """Density estimate at a single point."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError("estimate takes a single point; use estimate_batch for many")
    return float(estimate_batch(model, x[None, :])[0])


def fit_model(X, cfg=None, n_large_eval=None, contact_correction=True):
    """Fit a dipole field on ``X`` and wrap it as a :class:`DensityModel`."""
    cfg = cfg if cfg is not None else FitConfig()
    index = NeighborIndex(X)
    phi, report = fit(index.points, cfg, index=index)
    return DensityModel(
        points=index.points,
        phi=phi,
        fit_config=cfg,
        n_large_eval=cfg.n_large_fit if n_large_eval is None else n_large_eval,
        report=report,
        contact_correction=contact_correction,
        _index=index,
    )


def gaussian_density(sigma=1.0, dim=2):
    """Isotropic centred normal density as a function of radius."""
    norm = (2.0 * math.pi * sigma * sigma) ** (-dim / 2)

    def g(r):
        r = np.asarray(r, dtype=np.float64)
        return norm * np.exp(-0.5 * (r / sigma) ** 2)

    return g


@dataclass(frozen=True)
class RadialProfile:
    bin_edges: np.ndarray
    counts: np.ndarray
    mean_estimate: np.ndarray
    spread: np.ndarray
    true_density: np.ndarray

    def rows(self):
        """``(r_lo, r_hi, count, mean, spread, truth)`` per bin; absent values are None."""
        for i in range(len(self.counts)):
            yield (
                float(self.bin_edges[i]),
                float(self.bin_edges[i + 1]),
                int(self.counts[i]),
                _opt(self.mean_estimate[i]),
                _opt(self.spread[i]),
                _opt(self.true_density[i]),
            )


def _opt(v):
    return None if np.isnan(v) else float(v)


def profile_values(values, radii, n_bins, r_max, truth=None):
    """Bin per-point values by radius into ``n_bins`` equal bins on ``[0, r_max]``.

    Points beyond ``r_max`` are dropped; ``r == r_max`` goes to the last bin.
    Mean and spread (population standard deviation) are NaN in empty bins.
    """
    if n_bins < 1:
        raise ValueError("n_bins must be >= 1")
    if not r_max > 0:
        raise ValueError("r_max must be positive")
    values = np.asarray(values, dtype=np.float64)
    radii = np.asarray(radii, dtype=np.float64)
    edges = np.linspace(0.0, r_max, n_bins + 1)
    keep = radii <= r_max
    b = np.minimum((radii[keep] / r_max * n_bins).astype(np.int64), n_bins - 1)
    v = values[keep]
    counts = np.bincount(b, minlength=n_bins)
    mean = np.full(n_bins, np.nan)
    spread = np.full(n_bins, np.nan)
    for i in np.flatnonzero(counts):
        vi = v[b == i]
        mean[i] = vi.mean()
        spread[i] = vi.std()
    centers = 0.5 * (edges[:-1] + edges[1:])
    truth_col = np.full(n_bins, np.nan) if truth is None else np.asarray(truth(centers), dtype=np.float64)
    return RadialProfile(edges, counts, mean, spread, truth_col)


def radial_profile(model, center=None, n_bins=40, r_max=4.0, truth=None):
    """Profile of the estimate evaluated at every sample point versus distance from ``center``."""
    center = np.zeros(model.dim) if center is None else np.asarray(center, dtype=np.float64)
    values = estimate_batch(model, model.points)
    radii = np.linalg.norm(model.points - center, axis=1)
    return profile_values(values, radii, n_bins, r_max, truth)


class GreenDensity(BaseEstimator):
    """Green's-function dipole-kernel density estimator.

    Parameters
    ----------
    n_large : int, default=20
        Points wanted in the stable shell while fitting the field.
    n_large_eval : int, optional
        Same, at evaluation time. Defaults to ``n_large``.
    step_cap : float, default=0.1
        Largest rotation of a dipole per sweep, in radians.
    tol : float, default=1e-3
        Stop once the mean dipole/field angle drops below this.
    max_iter : int, default=2000
    restarts : int, default=3
        Extra random initialisations; the lowest-energy fit is kept.
    random_state : int, default=0
    contact_correction : bool, default=True
        Rescale for the contact term removed with the exclusion sphere.

    Attributes
    ----------
    model_ : DensityModel
    field_ : ndarray of shape (n_samples, n_features)
    fit_report_ : FitReport
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
        contact_correction=True,
    ):
        self.n_large = n_large
        self.n_large_eval = n_large_eval
        self.step_cap = step_cap
        self.tol = tol
        self.max_iter = max_iter
        self.restarts = restarts
        self.random_state = random_state
        self.contact_correction = contact_correction

    def _config(self):
        return FitConfig(
            n_large_fit=self.n_large,
            step_cap=self.step_cap,
            tolerance=self.tol,
            max_iterations=self.max_iter,
            restarts=self.restarts,
            seed=self.random_state,
        )

    def fit(self, X, y=None):
        X = check_sample(X)
        self.model_ = fit_model(X, self._config(), self.n_large_eval, self.contact_correction)
        self.field_ = self.model_.phi
        self.fit_report_ = self.model_.report
        self.n_features_in_ = X.shape[1]
        return self

    def density(self, X):
        """Estimated density at each row of ``X``."""
        check_is_fitted(self, "model_")
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.n_features_in_:
            raise ValueError(f"expected array of shape (m, {self.n_features_in_})")
        return estimate_batch(self.model_, X)

    def score_samples(self, X):
        """Log density; ``-inf`` where the estimate is zero."""
        with np.errstate(divide="ignore"):
            return np.log(self.density(X))

    def score(self, X, y=None):
        return float(np.sum(self.score_samples(X)))
