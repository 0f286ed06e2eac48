import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from greenkde.kernel import apply_dipole, density_scale, dipole_kernel, kernel_prefactor, unit_sphere_surface
from greenkde.validation import fd_kernel, kernel_fd_check


@pytest.mark.parametrize(
    "n, expected",
    [(2, 2 * math.pi), (3, 4 * math.pi), (4, 2 * math.pi**2)],
)
def test_unit_sphere_surface(n, expected):
    assert unit_sphere_surface(n) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("n", [1, 0, -3, 2.5])
def test_unit_sphere_surface_rejects_bad_dim(n):
    with pytest.raises(ValueError):
        unit_sphere_surface(n)


def test_kernel_3d_axis():
    np.testing.assert_allclose(dipole_kernel([1.0, 0.0, 0.0]), np.diag([-2.0, 1.0, 1.0]), atol=1e-15)


def test_kernel_2d_axis():
    np.testing.assert_allclose(dipole_kernel([0.0, 1.0]), np.diag([1.0, -1.0]), atol=1e-15)


@pytest.mark.parametrize("r", [[1.0, 0.0, 0.0], [0.0, 1.0]])
def test_kernel_matches_finite_differences_at_axis(r):
    K = dipole_kernel(r)
    np.testing.assert_allclose(fd_kernel(np.array(r)), K, rtol=0, atol=1e-6 * np.abs(K).max())


def test_kernel_rejects_zero_displacement():
    with pytest.raises(ValueError):
        dipole_kernel([0.0, 0.0, 0.0])
    with pytest.raises(ValueError):
        dipole_kernel([1e-13, 0.0])


def test_prefactor():
    assert kernel_prefactor(2) == 1.0
    assert kernel_prefactor(3) == 1.0
    assert kernel_prefactor(5) == 3.0


def test_density_scale():
    assert density_scale(2) == 2.0
    assert density_scale(3) == 1.5
    assert density_scale(5) == pytest.approx(5 / 12)


def test_apply_dipole_examples():
    np.testing.assert_allclose(apply_dipole([1.0, 0, 0], [0, 0, 1.0]), [0, 0, 1.0], atol=1e-15)
    np.testing.assert_allclose(apply_dipole([1.0, 0, 0], [1.0, 0, 0]), [-2.0, 0, 0], atol=1e-15)


def test_apply_dipole_rejects_non_unit():
    with pytest.raises(ValueError):
        apply_dipole([1.0, 0.0], [1.0, 1.0])


vectors = st.integers(2, 6).flatmap(
    lambda n: st.tuples(
        st.lists(st.floats(-10, 10), min_size=n, max_size=n),
        st.lists(st.floats(-1, 1), min_size=n, max_size=n),
    )
)


@settings(max_examples=200, deadline=None)
@given(vectors)
def test_kernel_properties(rv):
    r = np.array(rv[0])
    p = np.array(rv[1])
    if np.linalg.norm(r) < 1e-3 or np.linalg.norm(p) < 1e-3:
        return
    p /= np.linalg.norm(p)
    n = r.shape[0]
    K = dipole_kernel(r)
    scale = np.abs(K).max()
    assert np.abs(K - K.T).max() <= 1e-12 * scale
    assert np.abs(dipole_kernel(-r) - K).max() <= 1e-12 * scale
    assert abs(np.trace(K)) < 1e-12 * np.linalg.norm(K)
    for lam in (0.5, 2.0, 10.0):
        np.testing.assert_allclose(dipole_kernel(lam * r), lam**-n * K, rtol=0, atol=1e-12 * scale * lam**-n)
    Kp = K @ p
    np.testing.assert_allclose(apply_dipole(r, p), Kp, rtol=0, atol=1e-12 * np.abs(K).max())


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_fd_check(n):
    assert kernel_fd_check(n, samples=30, seed=n) < 1e-5


def test_fd_oracle_catches_sign_error():
    r = np.array([0.3, -0.8, 0.5])
    assert np.abs(fd_kernel(r) + dipole_kernel(r)).max() > 0.1
