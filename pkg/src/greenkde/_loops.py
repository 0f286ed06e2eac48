"""Compiled inner loops.

Each query's sum over source points runs sequentially in ascending source
index inside one ``prange`` iteration, so results are bit-identical for any
number of threads.
"""
import math

import numba as nb
import numpy as np

# tbb on this platform is too old and numba warns on every import otherwise
if nb.config.THREADING_LAYER == "default":
    nb.config.THREADING_LAYER = "workqueue"


@nb.njit(cache=True)
def sqdist_to(queries, points, idx):
    """Squared distance from ``queries[q]`` to ``points[idx[q]]``.

    Uses the same accumulation order as the field loops, so a comparison
    ``r2 <= cutoff2`` inside them is exact for the neighbour that set the
    cutoff.
    """
    n = points.shape[1]
    out = np.empty(queries.shape[0])
    for q in range(queries.shape[0]):
        j = idx[q]
        if n == 2:
            rx = queries[q, 0] - points[j, 0]
            ry = queries[q, 1] - points[j, 1]
            out[q] = rx * rx + ry * ry
        elif n == 3:
            rx = queries[q, 0] - points[j, 0]
            ry = queries[q, 1] - points[j, 1]
            rz = queries[q, 2] - points[j, 2]
            out[q] = rx * rx + ry * ry + rz * rz
        else:
            s = 0.0
            for d in range(n):
                t = queries[q, d] - points[j, d]
                s += t * t
            out[q] = s
    return out


@nb.njit(cache=True, parallel=True)
def _field_2d(queries, points, phi, cutoff2, c_n):
    nq = queries.shape[0]
    ns = points.shape[0]
    out = np.zeros((nq, 2))
    for q in nb.prange(nq):
        qx = queries[q, 0]
        qy = queries[q, 1]
        lim = cutoff2[q]
        ax = 0.0
        ay = 0.0
        for j in range(ns):
            rx = qx - points[j, 0]
            ry = qy - points[j, 1]
            r2 = rx * rx + ry * ry
            if r2 <= lim:
                continue
            inv = 1.0 / r2
            px = phi[j, 0]
            py = phi[j, 1]
            w = 2.0 * (rx * px + ry * py) * inv
            ax += inv * (px - w * rx)
            ay += inv * (py - w * ry)
        out[q, 0] = c_n * ax
        out[q, 1] = c_n * ay
    return out


@nb.njit(cache=True, parallel=True)
def _field_3d(queries, points, phi, cutoff2, c_n):
    nq = queries.shape[0]
    ns = points.shape[0]
    out = np.zeros((nq, 3))
    for q in nb.prange(nq):
        qx = queries[q, 0]
        qy = queries[q, 1]
        qz = queries[q, 2]
        lim = cutoff2[q]
        ax = 0.0
        ay = 0.0
        az = 0.0
        for j in range(ns):
            rx = qx - points[j, 0]
            ry = qy - points[j, 1]
            rz = qz - points[j, 2]
            r2 = rx * rx + ry * ry + rz * rz
            if r2 <= lim:
                continue
            inv = 1.0 / r2
            inv_n = inv * math.sqrt(inv)
            px = phi[j, 0]
            py = phi[j, 1]
            pz = phi[j, 2]
            w = 3.0 * (rx * px + ry * py + rz * pz) * inv
            ax += inv_n * (px - w * rx)
            ay += inv_n * (py - w * ry)
            az += inv_n * (pz - w * rz)
        out[q, 0] = c_n * ax
        out[q, 1] = c_n * ay
        out[q, 2] = c_n * az
    return out


@nb.njit(cache=True, parallel=True)
def _field_nd(queries, points, phi, cutoff2, c_n):
    nq = queries.shape[0]
    ns = points.shape[0]
    n = points.shape[1]
    half = n // 2
    odd = n % 2 == 1
    out = np.zeros((nq, n))
    for q in nb.prange(nq):
        acc = np.zeros(n)
        r = np.empty(n)
        lim = cutoff2[q]
        for j in range(ns):
            r2 = 0.0
            for d in range(n):
                t = queries[q, d] - points[j, d]
                r[d] = t
                r2 += t * t
            if r2 <= lim:
                continue
            inv = 1.0 / r2
            inv_n = 1.0
            for _ in range(half):
                inv_n *= inv
            if odd:
                inv_n *= math.sqrt(inv)
            proj = 0.0
            for d in range(n):
                proj += r[d] * phi[j, d]
            w = n * proj * inv
            for d in range(n):
                acc[d] += inv_n * (phi[j, d] - w * r[d])
        for d in range(n):
            out[q, d] = c_n * acc[d]
    return out


def induced_field(queries, points, phi, cutoff2, c_n):
    """Sum ``K(q - x_j) phi_j`` over sources with ``|q - x_j|^2 > cutoff2[q]``.

    The kernel prefactor ``c_n`` is applied, the ``1/(N S_n)`` scale is not.
    """
    queries = np.ascontiguousarray(queries, dtype=np.float64)
    points = np.ascontiguousarray(points, dtype=np.float64)
    phi = np.ascontiguousarray(phi, dtype=np.float64)
    cutoff2 = np.ascontiguousarray(cutoff2, dtype=np.float64)
    n = points.shape[1]
    if queries.shape[0] == 0:
        return np.zeros((0, n))
    if n == 2:
        return _field_2d(queries, points, phi, cutoff2, float(c_n))
    if n == 3:
        return _field_3d(queries, points, phi, cutoff2, float(c_n))
    return _field_nd(queries, points, phi, cutoff2, float(c_n))
