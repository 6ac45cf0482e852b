# clustering/certificates.py
"""Exhaustive per-norm optima for k-clustering and facility location."""
import itertools
import logging
import math

import numpy as np

from clustering.metric import distance_vector
from equinorm.exceptions import SizeCapError
from equinorm.utils import cluster_subset_cap, safe_ratio
from norms.vectors import as_weight_vector

logger = logging.getLogger(__name__)


def _sorted_rows(M):
    return -np.sort(-M, axis=1)


def _weight_matrix(weights):
    return np.vstack([as_weight_vector(w).entries for w in weights])


def k_subsets_domain(metric, k, cap=None):
    """(facility sets, distance vectors) for every k-subset of allowed facilities."""
    cap = cluster_subset_cap() if cap is None else cap
    allowed = metric.allowed
    k = min(k, len(allowed))
    count = math.comb(len(allowed), k)
    if count > cap:
        raise SizeCapError(f"{count} facility subsets exceed cap {cap}", size=count, cap=cap)
    subsets = [tuple(int(f) for f in c) for c in itertools.combinations(allowed, k)]
    return subsets, np.vstack([distance_vector(metric, F) for F in subsets])


def kclustering_optima(metric, k, weights, cap=None):
    """Per weight vector, the least ordered norm of x^F over |F| = k."""
    _, M = k_subsets_domain(metric, k, cap)
    return (_sorted_rows(M) @ _weight_matrix(weights).T).min(axis=0)


def kclustering_ratio(metric, facilities, k, weights, cap=None):
    """Worst ratio of x^C against the per-norm k-facility optimum."""
    mine = np.sort(distance_vector(metric, facilities))[::-1] @ _weight_matrix(weights).T
    optima = kclustering_optima(metric, k, weights, cap)
    return max(safe_ratio(float(a), float(b)) for a, b in zip(mine, optima))


def _all_subsets(metric, cap):
    allowed = metric.allowed
    count = 2 ** len(allowed) - 1
    if count > cap:
        raise SizeCapError(f"{count} facility subsets exceed cap {cap}", size=count, cap=cap)
    return [
        tuple(int(f) for f in c)
        for size in range(1, len(allowed) + 1)
        for c in itertools.combinations(allowed, size)
    ]


def ufl_values(metric, weights, cap=None):
    """(subsets, matrix of |F| + ||x^F||_w with one row per subset and one column per weight)."""
    cap = cluster_subset_cap() if cap is None else cap
    subsets = _all_subsets(metric, cap)
    M = np.vstack([distance_vector(metric, F) for F in subsets])
    sizes = np.array([len(F) for F in subsets], dtype=float)
    return subsets, _sorted_rows(M) @ _weight_matrix(weights).T + sizes[:, None]


def ufl_ratio_table(metric, portfolio, weights, cap=None):
    """[(weight label, ratio of the best portfolio set to the UFL optimum)]."""
    weights = [as_weight_vector(w) for w in weights]
    _, values = ufl_values(metric, weights, cap)
    optima = values.min(axis=0)
    table = []
    for j, w in enumerate(weights):
        best = min(
            len(d["open"]) + float(np.sort(row)[::-1] @ w.entries)
            for row, d in zip(portfolio.matrix, portfolio.details)
        )
        table.append((str(w), safe_ratio(best, float(optima[j]))))
    return table


def best_single_ufl_ratio(metric, weights, cap=None):
    """min over facility sets of the worst ratio to the per-norm UFL optimum; (ratio, set)."""
    subsets, values = ufl_values(metric, weights, cap)
    ratios = values / values.min(axis=0)
    worst = ratios.max(axis=1)
    best = int(np.argmin(worst))
    logger.debug(f"best single UFL solution {subsets[best]} at ratio {worst[best]:.6g}")
    return float(worst[best]), subsets[best]


def nearest_facility_distances(metric):
    """Per point, the distance to the closest allowed facility other than itself."""
    D = metric.dist[:, metric.allowed].copy()
    D[metric.allowed, np.arange(len(metric.allowed))] = np.inf
    nearest = D.min(axis=1)
    # a lone allowed point always opens, so it is at distance 0
    nearest[np.isinf(nearest)] = 0.0
    return nearest


def _without_largest(values, k):
    ranked = np.sort(values)[::-1]
    k = min(k, len(ranked))
    return np.concatenate([ranked[k:], np.zeros(k)])


def kclustering_lower_bound(metric, k, w):
    """
    A value no k facilities beat under ||.||_w: every point outside F is at
    least its nearest-facility distance away, and at most k points are in F.
    """
    w = as_weight_vector(w)
    return float(_without_largest(nearest_facility_distances(metric), k) @ w.entries)


def ufl_lower_bound(metric, w):
    """min over f of f plus the k-clustering bound for f facilities."""
    w = as_weight_vector(w)
    nearest = nearest_facility_distances(metric)
    return min(
        f + float(_without_largest(nearest, f) @ w.entries)
        for f in range(1, len(metric.allowed) + 1)
    )
