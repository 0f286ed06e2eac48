"""Green's-function dipole-kernel density estimation and likelihood-ratio classification."""
from greenkde.classifier import GreenLikelihoodClassifier, LikelihoodModel, ks_distance, response, train
from greenkde.density import DensityModel, GreenDensity, estimate, estimate_batch, fit_model, radial_profile
from greenkde.knn import KNNDensity, ball_volume, knn_density
from greenkde.neighbors import DuplicatePointsError, NeighborIndex, check_sample
from greenkde.solver import FitConfig, FitReport, fit

__version__ = "0.1.0"

__all__ = [
    "DensityModel",
    "DuplicatePointsError",
    "FitConfig",
    "FitReport",
    "GreenDensity",
    "GreenLikelihoodClassifier",
    "KNNDensity",
    "LikelihoodModel",
    "NeighborIndex",
    "ball_volume",
    "check_sample",
    "estimate",
    "estimate_batch",
    "fit",
    "fit_model",
    "knn_density",
    "ks_distance",
    "radial_profile",
    "response",
    "train",
]
