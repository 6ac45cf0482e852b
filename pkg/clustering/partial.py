# clustering/partial.py
"""Partial clustering: k facilities covering as many points as possible within a radius."""
import itertools
import logging
import math

import numpy as np

from clustering.metric import FacilitySet, coverage
from equinorm.exceptions import ArgumentError, SizeCapError
from equinorm.utils import cluster_subset_cap

logger = logging.getLogger(__name__)

EXACT = "exact"
GREEDY3 = "greedy3"

# radius multiplier each partial clustering mode covers at
COVER_FACTOR = {EXACT: 1.0, GREEDY3: 3.0}


def check_mode(mode):
    if mode not in COVER_FACTOR:
        raise ArgumentError(f"unknown clustering mode {mode!r}; choose from {sorted(COVER_FACTOR)}")
    return mode


def check_k(k):
    if isinstance(k, bool) or int(k) != k or k < 1:
        raise ArgumentError(f"k must be a positive integer, got {k!r}")
    return int(k)


def partial_clustering_exhaustive(metric, k, R, cap=None):
    """The first k-subset of allowed facilities, in lexicographic order, covering the most points within R."""
    k = check_k(k)
    allowed = metric.allowed
    if k >= len(allowed):
        return FacilitySet(allowed, provenance=f"all allowed, R={R:g}")
    cap = cluster_subset_cap() if cap is None else cap
    count = math.comb(len(allowed), k)
    if count > cap:
        raise SizeCapError(f"{count} facility subsets exceed cap {cap}", size=count, cap=cap)

    ball = metric.dist[:, allowed] <= R
    best, best_covered = None, -1
    for combo in itertools.combinations(range(len(allowed)), k):
        covered = int(ball[:, combo].any(axis=1).sum())
        if covered > best_covered:
            best, best_covered = combo, covered
            if covered == metric.n:
                break
    return FacilitySet(allowed[list(best)], provenance=f"exhaustive R={R:g}")


def partial_clustering_greedy3(metric, k, R):
    """
    k greedy picks: each opens the allowed facility with the most uncovered
    points within R, then marks everything within 3R of it covered. Covers
    at least as many points within 3R as any k facilities cover within R.
    """
    k = check_k(k)
    allowed = metric.allowed
    if k >= len(allowed):
        return FacilitySet(allowed, provenance=f"all allowed, R={R:g}")

    ball = metric.dist[:, allowed] <= R
    wide = metric.dist[:, allowed] <= 3.0 * R
    uncovered = np.ones(metric.n, dtype=bool)
    picked = []
    for _ in range(k):
        if not uncovered.any():
            break
        gains = (ball & uncovered[:, None]).sum(axis=0)
        gains[picked] = -1
        f = int(np.argmax(gains))
        picked.append(f)
        uncovered &= ~wide[:, f]
    return FacilitySet(allowed[picked], provenance=f"greedy3 R={R:g}")


def kcenter_radius(metric, k, mode=EXACT, cap=None):
    """
    Exact mode: the k-center optimum D, by binary search over candidate radii.
    Greedy mode: the smallest candidate radius R at which greedy3 covers every
    point within 3R; R <= D since greedy3 always succeeds at D.
    """
    k = check_k(k)
    mode = check_mode(mode)
    radii = metric.candidate_radii()

    if mode == EXACT:
        lo, hi = 0, len(radii) - 1
        while lo < hi:
            mid = (lo + hi) // 2
            chosen = partial_clustering_exhaustive(metric, k, radii[mid], cap)
            if coverage(metric, chosen, radii[mid]).all():
                hi = mid
            else:
                lo = mid + 1
        radius = float(radii[lo])
    else:
        radius = float(radii[-1])
        for R in radii:
            chosen = partial_clustering_greedy3(metric, k, R)
            if coverage(metric, chosen, 3.0 * R).all():
                radius = float(R)
                break
    logger.debug(f"k-center radius ({mode}) for k={k}, n={metric.n}: {radius:g}")
    return radius
