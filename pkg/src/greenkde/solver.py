"""Fitting the unit dipole field by rotating each dipole toward its induced field."""
import logging
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from greenkde._loops import induced_field, sqdist_to
from greenkde.kernel import kernel_prefactor, unit_sphere_surface
from greenkde.neighbors import NeighborIndex

log = logging.getLogger(__name__)

#: Rotation applied to a dipole sitting exactly antiparallel to its field.
ANTIPARALLEL_KICK = 0.01


@dataclass(frozen=True)
class FitConfig:
    """Settings for :func:`fit`.

    ``n_large_fit`` is the number of points wanted in the stable shell just
    outside each exclusion sphere; ``n * n_large_fit`` nearest neighbours
    of every sample point are left out of its field sum.  Zero disables the
    exclusion (only the point itself is skipped).
    """

    n_large_fit: int = 20
    step_cap: float = 0.1
    tolerance: float = 1e-3
    max_iterations: int = 2000
    restarts: int = 3
    seed: int = 0

    def __post_init__(self):
        if int(self.n_large_fit) != self.n_large_fit or self.n_large_fit < 0:
            raise ValueError(f"n_large_fit must be a nonnegative integer, got {self.n_large_fit!r}")
        if not 0.0 < self.step_cap < math.pi:
            raise ValueError(f"step_cap must lie in (0, pi), got {self.step_cap!r}")
        if not self.tolerance > 0.0:
            raise ValueError(f"tolerance must be positive, got {self.tolerance!r}")
        if int(self.max_iterations) != self.max_iterations or self.max_iterations < 1:
            raise ValueError(f"max_iterations must be a positive integer, got {self.max_iterations!r}")
        if int(self.restarts) != self.restarts or self.restarts < 0:
            raise ValueError(f"restarts must be a nonnegative integer, got {self.restarts!r}")
        if int(self.seed) != self.seed or not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")

    def n_discr(self, dim):
        return dim * self.n_large_fit

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class FitReport:
    iterations_used: int
    energy_initial: float
    energy_final: float
    mean_misalignment: float
    restart_energies: tuple = field(default_factory=tuple)
    converged: bool = False
    best_restart: int = 0

    def to_dict(self):
        d = asdict(self)
        d["restart_energies"] = list(self.restart_energies)
        return d

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        d["restart_energies"] = tuple(d.get("restart_energies", ()))
        return cls(**d)


def init_field(n_points, dim, seed):
    """Independent unit vectors, uniform on the sphere, from normalised Gaussian draws."""
    if n_points < 2:
        raise ValueError("need at least two points")
    rng = np.random.default_rng(seed)
    phi = rng.standard_normal((n_points, dim))
    phi /= np.linalg.norm(phi, axis=1, keepdims=True)
    return phi


def exclusion_cutoffs(index, n_discr):
    """Squared exclusion radius of every sample point.

    The radius is the distance to the ``n_discr``-th nearest other point, so
    that point and all closer ones are left out of the field sum.
    """
    N = index.n_samples
    if n_discr > N - 2:
        raise ValueError(
            f"{n_discr} excluded neighbours leave fewer than one source point for a sample of {N}"
        )
    if n_discr == 0:
        return np.zeros(N)
    _, nb = index.kth_neighbors(index.points, n_discr, exclude_self=True)
    return sqdist_to(index.points, index.points, nb)


def field_scale(n_points, dim):
    return 1.0 / (n_points * unit_sphere_surface(dim))


def fields(points, phi, cutoff2):
    """Induced field at every sample point, ``(1/(N S_n)) sum_j K(x_i - x_j) phi_j``."""
    N, n = points.shape
    return induced_field(points, points, phi, cutoff2, kernel_prefactor(n)) * field_scale(N, n)


def compute_field(X, phi, index, cfg, i):
    """Induced field at sample point ``i`` from all points outside its exclusion sphere."""
    index = index if index is not None else NeighborIndex(X)
    n = index.dim
    cutoff2 = exclusion_cutoffs(index, cfg.n_discr(n))
    pts = index.points
    E = induced_field(pts[i : i + 1], pts, phi, cutoff2[i : i + 1], kernel_prefactor(n))
    return E[0] * field_scale(index.n_samples, n)


def energy_from_fields(phi, E):
    return -float(np.mean(np.sum(phi * E, axis=1)))


def energy(X, phi, index, cfg):
    """Dipole energy ``-(1/N) sum_i phi_i . E_i``."""
    index = index if index is not None else NeighborIndex(X)
    cutoff2 = exclusion_cutoffs(index, cfg.n_discr(index.dim))
    return energy_from_fields(phi, fields(index.points, phi, cutoff2))


def misalignment(phi, E):
    """Angle between each dipole and its field; NaN where the field vanishes."""
    dot = np.sum(phi * E, axis=1)
    perp = np.linalg.norm(E - dot[:, None] * phi, axis=1)
    ang = np.arctan2(perp, dot)
    ang[np.all(E == 0.0, axis=1)] = np.nan
    return ang


def mean_misalignment(phi, E):
    ang = misalignment(phi, E)
    ok = ~np.isnan(ang)
    return float(ang[ok].mean()) if ok.any() else 0.0


def rotate_toward(phi_i, E_i, step_cap):
    """Rotate a unit vector toward ``E_i`` by at most ``step_cap`` radians.

    Moves in the plane of ``phi_i`` and ``E_i`` and never past ``E_i``: if
    the angle between them is below the cap the result is ``E_i/|E_i|``.
    A zero, parallel or antiparallel field leaves ``phi_i`` unchanged.
    """
    phi_i = np.asarray(phi_i, dtype=np.float64)
    E_i = np.asarray(E_i, dtype=np.float64)
    if not np.any(phi_i):
        raise ValueError("phi_i must be nonzero")
    out = _rotate(phi_i[None, :], E_i[None, :], step_cap)
    return out[0]


def _rotate(phi, E, step_cap):
    dot = np.sum(phi * E, axis=1)
    perp = E - dot[:, None] * phi
    pn = np.linalg.norm(perp, axis=1)
    en = np.linalg.norm(E, axis=1)
    ang = np.arctan2(pn, dot)
    out = phi.copy()
    move = (en > 0.0) & (pn > 1e-12 * en)
    snap = move & (ang <= step_cap)
    out[snap] = E[snap] / en[snap, None]
    step = move & ~snap
    if step.any():
        t = perp[step] / pn[step, None]
        new = math.cos(step_cap) * phi[step] + math.sin(step_cap) * t
        out[step] = new / np.linalg.norm(new, axis=1, keepdims=True)
    return out


def _kick_antiparallel(phi, E, seed):
    """Nudge dipoles pinned exactly against their field off the unstable point."""
    dot = np.sum(phi * E, axis=1)
    pn = np.linalg.norm(E - dot[:, None] * phi, axis=1)
    en = np.linalg.norm(E, axis=1)
    stuck = np.flatnonzero((en > 0.0) & (pn <= 1e-12 * en) & (dot < 0.0))
    for i in stuck:
        axis = np.random.default_rng([seed, int(i)]).standard_normal(phi.shape[1])
        axis -= (axis @ phi[i]) * phi[i]
        axis /= np.linalg.norm(axis)
        new = math.cos(ANTIPARALLEL_KICK) * phi[i] + math.sin(ANTIPARALLEL_KICK) * axis
        phi[i] = new / np.linalg.norm(new)
    return len(stuck)


def sweep(phi, E, step_cap, seed=0):
    """One synchronous update of every dipole against a fixed field snapshot."""
    out = _rotate(phi, E, step_cap)
    _kick_antiparallel(out, E, seed)
    return out


def _descend(points, cutoff2, phi, cfg, seed):
    E = fields(points, phi, cutoff2)
    u0 = energy_from_fields(phi, E)
    it = 0
    while True:
        m = mean_misalignment(phi, E)
        if m < cfg.tolerance or it >= cfg.max_iterations:
            break
        phi = sweep(phi, E, cfg.step_cap, seed)
        E = fields(points, phi, cutoff2)
        it += 1
    return phi, it, u0, energy_from_fields(phi, E), m


def fit(X, cfg, index=None):
    """Fit a dipole field to a sample.

    Runs ``cfg.restarts + 1`` independent descents, restart ``r`` seeded with
    ``cfg.seed ^ r``, and keeps the one with the lowest final energy.

    Returns
    -------
    phi : ndarray, shape (N, n)
    report : FitReport
    """
    index = index if index is not None else NeighborIndex(X)
    points = index.points
    N, n = points.shape
    cutoff2 = exclusion_cutoffs(index, cfg.n_discr(n))
    best = None
    energies = []
    for r in range(cfg.restarts + 1):
        seed = cfg.seed ^ r
        phi0 = init_field(N, n, seed)
        phi, it, u0, u1, m = _descend(points, cutoff2, phi0, cfg, seed)
        energies.append(u1)
        log.info("restart %d: %d sweeps, energy %.6g -> %.6g, misalignment %.3g", r, it, u0, u1, m)
        if best is None or u1 < best[3]:
            best = (phi, it, u0, u1, m, r)
    phi, it, u0, u1, m, r = best
    report = FitReport(
        iterations_used=it,
        energy_initial=u0,
        energy_final=u1,
        mean_misalignment=m,
        restart_energies=tuple(energies),
        converged=bool(m < cfg.tolerance),
        best_restart=r,
    )
    return phi, report
