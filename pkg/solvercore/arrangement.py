# solvercore/arrangement.py
"""
Regions cut out of the probability simplex by homogeneous hyperplanes
{lam : h . lam = 0}. A region is a maximal set of simplex points with the
same strict sign pattern; we return one interior sample per region.
"""
import logging
from collections import deque

import numpy as np

from equinorm.exceptions import ArgumentError

logger = logging.getLogger(__name__)

EXACT = "exact"
SAMPLED = "sampled"
AUTO = "auto"

SIGN_TOL = 1e-12
AREA_TOL = 1e-14


class ArrangementResult:
    def __init__(self, points, exact, num_hyperplanes):
        self.points = points
        self.exact = exact
        self.num_hyperplanes = num_hyperplanes

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __str__(self):
        label = "exact" if self.exact else "sampled, possibly incomplete"
        return f"{len(self.points)} regions from {self.num_hyperplanes} hyperplanes ({label})"


def region_bound(num_hyperplanes, r):
    return num_hyperplanes ** (r - 1) + 1


def _significant(hyperplanes, r):
    H = np.asarray(hyperplanes, dtype=float).reshape(-1, r)
    if H.size == 0:
        return H
    norms = np.abs(H).max(axis=1)
    return H[norms > SIGN_TOL]


def _segment_regions(H):
    # lam = (1 - t, t), h . lam = h0 + t (h1 - h0)
    cuts = []
    for h0, h1 in H:
        slope = h1 - h0
        if abs(slope) <= SIGN_TOL * max(abs(h0), abs(h1)):
            continue
        t = h0 / (h0 - h1)
        if 0.0 < t < 1.0:
            cuts.append(t)
    cuts = sorted(cuts)
    breakpoints = [0.0]
    for t in cuts:
        if t - breakpoints[-1] > 1e-12:
            breakpoints.append(t)
    if 1.0 - breakpoints[-1] <= 1e-12:
        breakpoints.pop()
    breakpoints.append(1.0)
    points = []
    for a, b in zip(breakpoints, breakpoints[1:]):
        t = 0.5 * (a + b)
        points.append(np.array([1.0 - t, t]))
    return points


def _clip(polygon, a, b, keep_positive):
    """Sutherland-Hodgman clip of a convex polygon by a.p + b >= 0 (or <= 0)."""
    sign = 1.0 if keep_positive else -1.0
    out = []
    count = len(polygon)
    for i in range(count):
        p, q = polygon[i], polygon[(i + 1) % count]
        fp = sign * (a @ p + b)
        fq = sign * (a @ q + b)
        if fp >= 0.0:
            out.append(p)
        if (fp > 0.0 > fq) or (fp < 0.0 < fq):
            t = fp / (fp - fq)
            out.append(p + t * (q - p))
    return out


def _area(polygon):
    if len(polygon) < 3:
        return 0.0
    xs = np.array([p[0] for p in polygon])
    ys = np.array([p[1] for p in polygon])
    return 0.5 * abs(xs @ np.roll(ys, -1) - ys @ np.roll(xs, -1))


def _triangle_regions(H):
    # lam = (1 - u - v, u, v), h . lam = h0 + u (h1 - h0) + v (h2 - h0)
    polygons = [[np.array([0.0, 0.0]), np.array([1.0, 0.0]), np.array([0.0, 1.0])]]
    for h in H:
        a = np.array([h[1] - h[0], h[2] - h[0]])
        b = h[0]
        scale = max(np.abs(h).max(), 1e-300)
        next_polygons = []
        for polygon in polygons:
            values = np.array([a @ p + b for p in polygon]) / scale
            if values.max() > 1e-12 and values.min() < -1e-12:
                for keep_positive in (True, False):
                    piece = _clip(polygon, a, b, keep_positive)
                    if _area(piece) > AREA_TOL:
                        next_polygons.append(piece)
            else:
                next_polygons.append(polygon)
        polygons = next_polygons
    points = []
    for polygon in polygons:
        u, v = np.mean(polygon, axis=0)
        points.append(np.array([1.0 - u - v, u, v]))
    return points


def _signature(H, lam):
    values = H @ lam
    scale = np.abs(H).max(axis=1) + 1e-300
    if np.any(np.abs(values) <= 1e-9 * scale):
        return None
    return tuple(np.sign(values).astype(int))


def _sampled_regions(H, r, samples, seed):
    rng = np.random.default_rng(seed)
    found = {}
    draws = rng.dirichlet(np.ones(r), size=samples)
    for lam in draws:
        key = _signature(H, lam)
        if key is not None and key not in found:
            found[key] = lam
    # one-hyperplane adjacency walk: step across each hyperplane from every region
    queue = deque(found.values())
    while queue:
        lam = queue.popleft()
        for h in H:
            direction = h - h.mean()
            denom = h @ direction
            if abs(denom) <= SIGN_TOL:
                continue
            t = -(h @ lam) / denom
            for overshoot in (1.0 + 1e-6, 1.01, 1.1):
                candidate = lam + overshoot * t * direction
                if candidate.min() <= 0.0:
                    continue
                candidate = candidate / candidate.sum()
                key = _signature(H, candidate)
                if key is not None and key not in found:
                    found[key] = candidate
                    queue.append(candidate)
                    break
    return [found[key] for key in sorted(found)]


def arrangement_regions(hyperplanes, r, mode=AUTO, samples=100_000, seed=0):
    """
    One sample point per strict-sign region of the simplex in R^r. Exact for
    r <= 3 (recursive splitting); sampling plus an adjacency walk otherwise.
    """
    if r < 1:
        raise ArgumentError(f"simplex dimension must be >= 1, got {r}")
    if mode not in (EXACT, SAMPLED, AUTO):
        raise ArgumentError(f"unknown arrangement mode {mode!r}")
    if mode == EXACT and r > 3:
        raise ArgumentError(f"exact arrangement needs r <= 3, got r={r}")
    H = _significant(hyperplanes, r)
    count = len(H)

    if r == 1:
        return ArrangementResult([np.array([1.0])], True, count)
    if mode == SAMPLED or (mode == AUTO and r > 3):
        points = _sampled_regions(H, r, samples, seed)
        logger.warning(
            f"sampled arrangement for r={r}: {len(points)} regions from {count} "
            f"hyperplanes, completeness not guaranteed"
        )
        return ArrangementResult(points, False, count)
    if r == 2:
        points = _segment_regions(H)
    else:
        points = _triangle_regions(H)
    logger.debug(f"exact arrangement r={r}: {len(points)} regions from {count} hyperplanes")
    return ArrangementResult(points, True, count)
