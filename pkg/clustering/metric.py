# clustering/metric.py
import logging
import math

import numpy as np
from scipy.spatial.distance import cdist

from equinorm.exceptions import ArgumentError
from equinorm.utils import make_rng

logger = logging.getLogger(__name__)

METRIC_TOL = 1e-9


class Metric:
    """
    A finite metric on points 0..n-1. `allowed` marks the points that may
    host a facility; by default every point may.
    """

    def __init__(self, dist, allowed=None):
        try:
            dist = np.atleast_2d(np.asarray(dist, dtype=float))
        except (TypeError, ValueError):
            raise ArgumentError("distances must be numeric")
        n = dist.shape[0]
        if dist.ndim != 2 or dist.shape != (n, n) or n == 0:
            raise ArgumentError(f"distances must be a square matrix, got {dist.shape}")
        if not np.all(np.isfinite(dist)) or np.any(dist < 0.0):
            raise ArgumentError("distances must be finite and nonnegative")
        if not np.allclose(dist, dist.T, rtol=0.0, atol=METRIC_TOL * (1.0 + dist.max())):
            raise ArgumentError("distances must be symmetric")
        if np.any(np.diag(dist) != 0.0):
            raise ArgumentError("distances must have a zero diagonal")
        slack = dist[:, None, :] - dist[:, :, None] - dist[None, :, :]
        if slack.max() > METRIC_TOL * (1.0 + dist.max()):
            raise ArgumentError("distances violate the triangle inequality")
        self.dist = dist
        self.allowed = self._allowed_indices(allowed, n)

    @staticmethod
    def _allowed_indices(allowed, n):
        if allowed is None:
            return np.arange(n)
        allowed = np.asarray(allowed)
        if allowed.dtype == bool:
            if allowed.shape != (n,):
                raise ArgumentError(f"allowed mask must have length {n}, got {allowed.shape}")
            indices = np.flatnonzero(allowed)
        else:
            indices = np.unique(allowed.astype(int))
            if indices.size and (indices[0] < 0 or indices[-1] >= n):
                raise ArgumentError(f"allowed facilities must lie in 0..{n - 1}")
        if indices.size == 0:
            raise ArgumentError("at least one point must be allowed to host a facility")
        return indices

    @property
    def n(self):
        return self.dist.shape[0]

    def __len__(self):
        return self.n

    def __str__(self):
        return f"Metric(n={self.n}, {len(self.allowed)} allowed facilities)"

    def candidate_radii(self):
        """Every distance from a point to an allowed facility, ascending."""
        return np.unique(self.dist[:, self.allowed])

    def to_json(self):
        data = {"type": "metric", "dist": self.dist.tolist()}
        if len(self.allowed) != self.n:
            data["allowed"] = self.allowed.tolist()
        return data


class FacilitySet:
    """Open facilities as sorted point indices, with how they were found."""

    def __init__(self, indices, provenance="", rounds=None):
        self.indices = tuple(sorted({int(i) for i in indices}))
        self.provenance = provenance
        self.rounds = list(rounds or [])

    def __len__(self):
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def __contains__(self, i):
        return i in self.indices

    def __eq__(self, other):
        return isinstance(other, FacilitySet) and self.indices == other.indices

    def __hash__(self):
        return hash(self.indices)

    def __repr__(self):
        return f"FacilitySet({list(self.indices)})"

    def to_json(self):
        return {"open": list(self.indices), "provenance": self.provenance}


def distance_vector(metric, facilities):
    """Per-point distance to the nearest open facility."""
    indices = list(facilities)
    if not indices:
        raise ArgumentError("distance vector needs at least one open facility")
    if min(indices) < 0 or max(indices) >= metric.n:
        raise ArgumentError(f"facility indices must lie in 0..{metric.n - 1}")
    return metric.dist[:, indices].min(axis=1)


def coverage(metric, facilities, radius):
    """Boolean mask of the points within `radius` of some facility."""
    indices = list(facilities)
    if not indices:
        return np.zeros(metric.n, dtype=bool)
    return metric.dist[:, indices].min(axis=1) <= radius


def star_metric(n):
    """Hub 0 at distance sqrt(n) from leaves 1..n, leaves 2 sqrt(n) apart."""
    if n < 1:
        raise ArgumentError(f"a star needs at least one leaf, got {n}")
    r = math.sqrt(n)
    dist = np.full((n + 1, n + 1), 2.0 * r)
    dist[0, :] = r
    dist[:, 0] = r
    np.fill_diagonal(dist, 0.0)
    return Metric(dist)


def random_metric(n, seed=0, dimension=2):
    """Euclidean distances between n uniform points of the unit square."""
    if n < 1:
        raise ArgumentError(f"need at least one point, got {n}")
    points = make_rng(seed).random((n, dimension))
    dist = cdist(points, points)
    dist = np.round((dist + dist.T) / 2.0, 12)
    np.fill_diagonal(dist, 0.0)
    logger.debug(f"random metric n={n} seed={seed}")
    return Metric(dist)
