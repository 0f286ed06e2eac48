"""Dipole kernel of the Laplace Green's function.

The kernel is the mixed second derivative (one index on each argument) of
``|x - x'|^-(n-2)``; in two dimensions the logarithm takes its place::

    K(r) = c_n * (I / |r|^n - n * r r^T / |r|^(n+2)),   r = x - x'

with ``c_n = n - 2`` for ``n >= 3`` and ``c_2 = 1``.
"""
import math

import numpy as np

#: Displacements shorter than this are treated as coincident points.
MIN_DISTANCE = 1e-12


def _check_dim(n):
    if int(n) != n or n < 2:
        raise ValueError(f"dimension must be an integer >= 2, got {n!r}")
    return int(n)


def unit_sphere_surface(n):
    """Surface area of the unit sphere in ``n`` dimensions, ``2 pi^(n/2) / Gamma(n/2)``."""
    n = _check_dim(n)
    return 2.0 * math.pi ** (n / 2) / math.gamma(n / 2)


def kernel_prefactor(n):
    """Constant ``c_n`` in front of the kernel bracket."""
    n = _check_dim(n)
    return 1.0 if n == 2 else float(n - 2)


def density_scale(n):
    """Factor turning an induced-field magnitude into a density.

    A ball excised around the evaluation point removes the contact term of the
    kernel, which carries ``1/n`` of the full identity, so the remaining sum
    reproduces ``(n-1)/n`` of the density.  The ``1/c_n`` undoes the
    prefactor for ``n > 3``, where the Green's function is normalised by
    ``(n-2) S_n`` rather than ``S_n``.
    """
    n = _check_dim(n)
    return n / ((n - 1) * kernel_prefactor(n))


def _displacement(r):
    r = np.asarray(r, dtype=np.float64)
    if r.ndim != 1:
        raise ValueError("displacement must be a 1-D vector")
    _check_dim(r.shape[0])
    r2 = float(r @ r)
    if not math.isfinite(r2):
        raise ValueError("displacement must be finite")
    if r2 <= MIN_DISTANCE * MIN_DISTANCE:
        raise ValueError("kernel is singular at zero displacement")
    return r, r2


def dipole_kernel(r):
    """Kernel matrix ``K(r)`` for a displacement ``r = x - x'``.

    Parameters
    ----------
    r : array_like, shape (n,)
        Nonzero displacement, ``n >= 2``.

    Returns
    -------
    ndarray, shape (n, n)
        Symmetric, traceless matrix scaling as ``|r|^-n``.
    """
    r, r2 = _displacement(r)
    n = r.shape[0]
    inv = 1.0 / r2
    inv_n = inv ** (n / 2)
    return kernel_prefactor(n) * inv_n * (np.eye(n) - n * inv * np.outer(r, r))


def apply_dipole(r, phi):
    """``K(r) @ phi`` without building the matrix."""
    r, r2 = _displacement(r)
    phi = np.asarray(phi, dtype=np.float64)
    if phi.shape != r.shape:
        raise ValueError("phi and r must have the same length")
    if abs(math.sqrt(float(phi @ phi)) - 1.0) > 1e-9:
        raise ValueError("phi must be a unit vector")
    n = r.shape[0]
    inv = 1.0 / r2
    inv_n = inv ** (n / 2)
    return kernel_prefactor(n) * inv_n * (phi - n * inv * float(r @ phi) * r)
