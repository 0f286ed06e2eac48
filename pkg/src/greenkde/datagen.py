"""Seeded synthetic samples for the Gaussian and twelve-Gaussians benchmarks."""
import numpy as np

#: Width of each signal Gaussian in the twelve-Gaussians benchmark.
TWELVE_SIGMA = 0.02

#: Centres on a 4 x 3 grid in the unit square, at least 0.25 apart.
TWELVE_CENTERS = np.array(
    [[(2 * i + 1) / 8, (2 * j + 1) / 6] for i in range(4) for j in range(3)], dtype=np.float64
)


def sample_gaussian(dim, n_points, sigma=1.0, seed=0):
    """``n_points`` draws from an isotropic centred normal with scale ``sigma``."""
    if n_points < 2:
        raise ValueError("n_points must be >= 2")
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    rng = np.random.default_rng(seed)
    return sigma * rng.standard_normal((n_points, dim))


def sample_twelve_plus_flat(n_signal, n_background, seed=0, return_components=False):
    """Signal: equal-weight mixture of the twelve Gaussians; background: uniform on [0, 1]^2."""
    if n_signal < 2 or n_background < 2:
        raise ValueError("sample sizes must be >= 2")
    rng = np.random.default_rng(seed)
    comp = rng.integers(len(TWELVE_CENTERS), size=n_signal)
    signal = TWELVE_CENTERS[comp] + TWELVE_SIGMA * rng.standard_normal((n_signal, 2))
    background = rng.random((n_background, 2))
    if return_components:
        return signal, background, comp
    return signal, background
