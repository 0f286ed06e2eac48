"""Sample validation and exact nearest-neighbour queries."""
import numpy as np
from scipy.spatial import cKDTree


class DuplicatePointsError(ValueError):
    """Raised when a sample contains identical rows."""

    def __init__(self, groups):
        self.groups = groups
        shown = "; ".join(", ".join(str(i) for i in g) for g in groups[:10])
        more = "" if len(groups) <= 10 else f" (+{len(groups) - 10} more groups)"
        super().__init__(f"sample contains duplicate rows: {shown}{more}")


def check_sample(X, min_size=2):
    """Validate a sample and return it as a C-contiguous float64 array.

    Rejects non-2-D input, fewer than ``min_size`` rows, fewer than two
    columns, non-finite entries and exact duplicate rows (the kernel is
    singular at zero distance).
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError(f"sample must be 2-D (points x coordinates), got shape {X.shape}")
    if X.shape[1] < 2:
        raise ValueError(f"dimension must be >= 2, got {X.shape[1]}")
    if X.shape[0] < min_size:
        raise ValueError(f"sample needs at least {min_size} points, got {X.shape[0]}")
    if not np.all(np.isfinite(X)):
        bad = np.flatnonzero(~np.all(np.isfinite(X), axis=1))
        raise ValueError(f"sample has non-finite rows: {bad[:10].tolist()}")
    _, inverse, counts = np.unique(X, axis=0, return_inverse=True, return_counts=True)
    if np.any(counts > 1):
        inverse = inverse.ravel()
        groups = [np.flatnonzero(inverse == u).tolist() for u in np.flatnonzero(counts > 1)]
        groups.sort()
        raise DuplicatePointsError(groups)
    return X


class NeighborIndex:
    """Exact k-nearest-neighbour index over a fixed sample.

    Backed by a k-d tree; results agree with a brute-force scan.
    """

    def __init__(self, X):
        self.points = check_sample(X)
        self.tree = cKDTree(self.points)

    @property
    def n_samples(self):
        return self.points.shape[0]

    @property
    def dim(self):
        return self.points.shape[1]

    def _as_queries(self, Q):
        Q = np.asarray(Q, dtype=np.float64)
        single = Q.ndim == 1
        Q = np.atleast_2d(Q)
        if Q.shape[1] != self.dim:
            raise ValueError(f"query dimension {Q.shape[1]} does not match sample dimension {self.dim}")
        return np.ascontiguousarray(Q), single

    def kth_neighbors(self, Q, k, exclude_self=False):
        """Index of and distance to the ``k``-th nearest sample point.

        Parameters
        ----------
        Q : array_like, shape (m, n) or (n,)
        k : int
            Rank, ``1 <= k``.
        exclude_self : bool or "auto"
            ``True`` skips one exact match per query (which must exist),
            ``"auto"`` skips it only where a query coincides with a sample
            point.

        Returns
        -------
        dist : ndarray, shape (m,)
        idx : ndarray of int64, shape (m,)
        """
        Q, single = self._as_queries(Q)
        k = int(k)
        limit = self.n_samples - (1 if exclude_self is True else 0)
        if not 1 <= k <= limit:
            raise ValueError(f"k={k} out of range [1, {limit}]")
        m = Q.shape[0]
        if m == 0:
            return np.zeros(0), np.zeros(0, dtype=np.int64)
        kq = min(k + 1, self.n_samples) if exclude_self else k
        dist, idx = self.tree.query(Q, k=kq)
        dist = dist.reshape(m, kq)
        idx = idx.reshape(m, kq).astype(np.int64)
        if exclude_self:
            hit = dist[:, 0] == 0.0
            if exclude_self is True and not np.all(hit):
                raise ValueError("exclude_self=True but a query is not a sample point")
            col = np.where(hit, k, k - 1)
            if np.any(col >= kq):
                raise ValueError(f"k={k} out of range once the self-match is excluded")
        else:
            col = np.full(m, k - 1)
        rows = np.arange(m)
        d, i = dist[rows, col], idx[rows, col]
        if single:
            return d[0], i[0]
        return d, i

    def kth_distance(self, x, k, exclude_self=False):
        """Distance from ``x`` to its ``k``-th nearest sample point."""
        d, _ = self.kth_neighbors(x, k, exclude_self=exclude_self)
        return float(d) if np.ndim(d) == 0 else d

    def beyond_radius(self, x, R):
        """Indices ``j`` with ``|x - x_j| > R`` strictly, ascending."""
        if R < 0:
            raise ValueError("radius must be nonnegative")
        x, _ = self._as_queries(x)
        d = np.sqrt(((self.points - x[0]) ** 2).sum(axis=1))
        return np.flatnonzero(d > R)
