import itertools
import math

import numpy as np
import pytest

from greenkde.datagen import TWELVE_CENTERS, TWELVE_SIGMA, sample_gaussian, sample_twelve_plus_flat


def test_gaussian_moments():
    X = sample_gaussian(2, 2000, 1.0, seed=42)
    assert X.shape == (2000, 2)
    assert np.all(np.abs(X.mean(axis=0)) < 4 / math.sqrt(2000))
    assert np.all(np.abs(X.var(axis=0) - 1.0) < 0.2)


def test_gaussian_sigma_and_seed():
    X = sample_gaussian(3, 5000, 2.5, seed=1)
    assert np.all(np.abs(X.var(axis=0) / 6.25 - 1.0) < 0.2)
    assert np.array_equal(X, sample_gaussian(3, 5000, 2.5, seed=1))
    assert not np.array_equal(X, sample_gaussian(3, 5000, 2.5, seed=2))
    with pytest.raises(ValueError):
        sample_gaussian(2, 1)
    with pytest.raises(ValueError):
        sample_gaussian(2, 10, 0.0)


def test_twelve_components():
    n = 12_000
    sig, bkg, comp = sample_twelve_plus_flat(n, 500, seed=3, return_components=True)
    counts = np.bincount(comp, minlength=12)
    assert np.all(np.abs(counts - n / 12) <= 4 * math.sqrt(n * (1 / 12) * (11 / 12)))
    for c in range(12):
        pts = sig[comp == c]
        assert np.all(np.abs(pts.mean(axis=0) - TWELVE_CENTERS[c]) < 4 * TWELVE_SIGMA / math.sqrt(len(pts)))


def test_twelve_centers_separated():
    assert TWELVE_CENTERS.shape == (12, 2)
    d = min(np.linalg.norm(a - b) for a, b in itertools.combinations(TWELVE_CENTERS, 2))
    assert d >= 0.25 >= 12 * TWELVE_SIGMA
    assert np.all((TWELVE_CENTERS > 0) & (TWELVE_CENTERS < 1))


def test_twelve_background_and_determinism():
    sig, bkg = sample_twelve_plus_flat(100, 1000, seed=9)
    assert np.all((bkg >= 0) & (bkg <= 1))
    s2, b2 = sample_twelve_plus_flat(100, 1000, seed=9)
    assert np.array_equal(sig, s2) and np.array_equal(bkg, b2)
    with pytest.raises(ValueError):
        sample_twelve_plus_flat(1, 10)
