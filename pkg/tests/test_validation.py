import numpy as np
import pytest

from greenkde.validation import (
    CheckResult,
    kernel_fd_check,
    kernel_invariants_check,
    kernel_report,
    normalization_check,
    shell_null_integral,
    sphere_points,
)


@pytest.mark.parametrize("phi", [[1.0, 0.0], [0.6, 0.8]])
def test_shell_null_2d(phi):
    assert shell_null_integral(2, 1.0, 100_000, phi) < 1e-3
    assert shell_null_integral(2, 0.3, 1_000, phi) < 1e-3


def test_shell_null_3d():
    assert shell_null_integral(3, 1.0, 100_000, [0.0, 0.6, 0.8], seed=1) < 1e-2


def test_shell_null_monte_carlo_scaling():
    def rms(M):
        return np.sqrt(np.mean([shell_null_integral(3, 1.0, M, seed=s) ** 2 for s in range(30)]))

    ratio = rms(1_000) / rms(16_000)
    assert 2.5 < ratio < 6.0  # sqrt(16) = 4


def test_shell_null_rejects():
    with pytest.raises(ValueError):
        shell_null_integral(3, 1.0, 50)
    with pytest.raises(ValueError):
        shell_null_integral(3, 0.0, 500)


def test_sphere_points_unit():
    for n in (2, 3, 5):
        u = sphere_points(n, 500, seed=1)
        np.testing.assert_allclose(np.linalg.norm(u, axis=1), 1.0, rtol=1e-14)


@pytest.mark.parametrize("n", [2, 3, 5])
def test_fd(n):
    assert kernel_fd_check(n, samples=100, seed=0) < 1e-5


def test_invariants():
    out = kernel_invariants_check(4, 50, seed=3)
    assert set(out) == {"symmetry", "parity", "scaling", "trace", "apply"}
    assert max(out.values()) < 1e-12


def test_report_lines():
    res = kernel_report([2], seed=0)
    assert all(r.passed for r in res)
    assert CheckResult("x", 2.0, 1.0).line().startswith("FAIL x")


def test_normalization_small_model(small_model):
    total = normalization_check(small_model, -5.0, 5.0, 41)
    assert 0.7 < total < 1.3
