"""Numerical oracles for the kernel and for fitted models.

The kernel checks compare against finite differences of the Green's
function itself, so a sign or constant error in :mod:`greenkde.kernel`
shows up here.
"""
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import trapezoid

from greenkde.density import estimate_batch
from greenkde.kernel import apply_dipole, dipole_kernel


def green_potential(r):
    """``|r|^-(n-2)``, or ``-ln|r|`` in two dimensions."""
    r = np.asarray(r, dtype=np.float64)
    n = r.shape[-1]
    rr = np.sqrt(np.sum(r * r, axis=-1))
    return -np.log(rr) if n == 2 else rr ** (2 - n)


def fd_kernel(r, step=1e-4):
    """Minus the Hessian of :func:`green_potential` by central differences."""
    r = np.asarray(r, dtype=np.float64)
    n = r.shape[0]
    eye = np.eye(n) * step
    K = np.empty((n, n))
    for a in range(n):
        for b in range(n):
            pp = green_potential(r + eye[a] + eye[b])
            pm = green_potential(r + eye[a] - eye[b])
            mp = green_potential(r - eye[a] + eye[b])
            mm = green_potential(r - eye[a] - eye[b])
            K[a, b] = -(pp - pm - mp + mm) / (4.0 * step * step)
    return K


def _random_displacements(dim, samples, rng, r_lo=0.5, r_hi=2.0):
    u = rng.standard_normal((samples, dim))
    u /= np.linalg.norm(u, axis=1, keepdims=True)
    return u * rng.uniform(r_lo, r_hi, size=(samples, 1))


def kernel_fd_check(dim, samples=100, seed=0, step=1e-4):
    """Worst relative deviation of :func:`dipole_kernel` from finite differences.

    Displacements have random directions and lengths in [0.5, 2]; deviation
    is ``max|K - K_fd| / max|K|`` per displacement.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for r in _random_displacements(dim, samples, rng):
        K = dipole_kernel(r)
        dev = np.max(np.abs(K - fd_kernel(r, step))) / np.max(np.abs(K))
        worst = max(worst, float(dev))
    return worst


def kernel_invariants_check(dim, samples=100, seed=0):
    """Worst relative violation of symmetry, parity, scaling and tracelessness."""
    rng = np.random.default_rng(seed)
    out = {"symmetry": 0.0, "parity": 0.0, "scaling": 0.0, "trace": 0.0, "apply": 0.0}
    for r in _random_displacements(dim, samples, rng, 0.1, 10.0):
        K = dipole_kernel(r)
        scale = np.max(np.abs(K))
        out["symmetry"] = max(out["symmetry"], np.max(np.abs(K - K.T)) / scale)
        out["parity"] = max(out["parity"], np.max(np.abs(dipole_kernel(-r) - K)) / scale)
        for lam in (0.5, 2.0, 10.0):
            Kl = dipole_kernel(lam * r) * lam**dim
            out["scaling"] = max(out["scaling"], np.max(np.abs(Kl - K)) / scale)
        out["trace"] = max(out["trace"], abs(np.trace(K)) / np.linalg.norm(K))
        phi = rng.standard_normal(dim)
        phi /= np.linalg.norm(phi)
        Kphi = K @ phi
        out["apply"] = max(out["apply"], np.max(np.abs(apply_dipole(r, phi) - Kphi)) / np.max(np.abs(Kphi)))
    return {k: float(v) for k, v in out.items()}


def sphere_points(dim, M, seed=0):
    """``M`` points on the unit sphere.

    In two dimensions these are equally spaced angles (periodic trapezoid
    rule); otherwise uniform random draws.
    """
    if dim == 2:
        t = 2.0 * math.pi * np.arange(M) / M
        return np.column_stack([np.cos(t), np.sin(t)])
    u = np.random.default_rng(seed).standard_normal((M, dim))
    return u / np.linalg.norm(u, axis=1, keepdims=True)


def shell_null_integral(dim, radius, M, phi=None, seed=0):
    """Relative size of the sphere-surface integral of ``K(x - x') phi``.

    Returns ``|mean_u K(R u) phi| / mean_u |K(R u) phi|`` over the sphere of
    radius ``R``; zero for an exact integral.
    """
    if M < 100:
        raise ValueError("need at least 100 surface points")
    if not radius > 0:
        raise ValueError("radius must be positive")
    if phi is None:
        phi = np.zeros(dim)
        phi[0] = 1.0
    phi = np.asarray(phi, dtype=np.float64)
    vals = np.array([apply_dipole(radius * u, phi) for u in sphere_points(dim, M, seed)])
    return float(np.linalg.norm(vals.mean(axis=0)) / np.linalg.norm(vals, axis=1).mean())


def default_grid(points, pad_sd=3.0, n_grid=101):
    """Axis-aligned box around the sample padded by ``pad_sd`` standard deviations per axis."""
    sd = points.std(axis=0)
    return points.min(axis=0) - pad_sd * sd, points.max(axis=0) + pad_sd * sd, n_grid


def normalization_check(model, lo=None, hi=None, n_grid=101):
    """Trapezoid-rule integral of the estimate over a regular grid."""
    if lo is None or hi is None:
        lo, hi, _ = default_grid(model.points, n_grid=n_grid)
    dim = model.dim
    lo = np.broadcast_to(np.asarray(lo, dtype=np.float64), (dim,))
    hi = np.broadcast_to(np.asarray(hi, dtype=np.float64), (dim,))
    axes = [np.linspace(lo[d], hi[d], n_grid) for d in range(dim)]
    mesh = np.meshgrid(*axes, indexing="ij")
    grid = np.column_stack([m.ravel() for m in mesh])
    g = estimate_batch(model, grid).reshape((n_grid,) * dim)
    for d in reversed(range(dim)):
        g = trapezoid(g, axes[d], axis=d)
    return float(g)


@dataclass(frozen=True)
class CheckResult:
    name: str
    value: float
    threshold: float

    @property
    def passed(self):
        return bool(self.value < self.threshold)

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: {self.value:.3e} < {self.threshold:g}"


def kernel_report(dims=(2, 3, 5), seed=0):
    """Finite-difference and invariant checks for each dimension."""
    out = []
    for n in dims:
        out.append(CheckResult(f"kernel_fd n={n}", kernel_fd_check(n, 100, seed), 1e-5))
        for name, v in kernel_invariants_check(n, 100, seed).items():
            out.append(CheckResult(f"kernel_{name} n={n}", v, 1e-12))
    return out


def shell_report(dims=(2, 3), seed=0, M=100_000):
    """Shell null test: quadrature in 2-D, Monte Carlo otherwise."""
    out = []
    for n in dims:
        tol = 1e-3 if n == 2 else 1e-2
        out.append(CheckResult(f"shell_null n={n}", shell_null_integral(n, 1.0, M, seed=seed), tol))
    return out
