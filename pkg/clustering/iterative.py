# clustering/iterative.py
import logging
import math

from clustering.metric import FacilitySet, distance_vector
from clustering.partial import (
    COVER_FACTOR,
    EXACT,
    GREEDY3,
    check_k,
    check_mode,
    kcenter_radius,
    partial_clustering_exhaustive,
    partial_clustering_greedy3,
)
from equinorm.utils import check_epsilon
from norms.ordered import ordered_norm
from portfolio.domain import Portfolio

logger = logging.getLogger(__name__)

# inner slack per mode; the overall factor is (cover factor) * (1 + 2 * inner)
INNER_EPSILON = {EXACT: 0.5, GREEDY3: 1.0 / 6.0}


def inner_epsilon(eps, mode):
    return check_epsilon(eps) * INNER_EPSILON[check_mode(mode)]


def round_count(n, inner):
    """Radii R_0 (1+e)^l for l = 0..L, with L = ceil(log_{1+e}(n/e))."""
    return math.ceil(math.log(n / inner) / math.log(1.0 + inner)) + 1


def facility_bound(n, k, eps, mode):
    """Most facilities iterative_clustering can open."""
    inner = inner_epsilon(eps, mode)
    if inner <= 1.0 / n:
        return n
    return k * round_count(n, inner)


def guarantee(eps, mode):
    return COVER_FACTOR[check_mode(mode)] + check_epsilon(eps)


def iterative_clustering(metric, k, eps, mode=EXACT, cap=None):
    """
    Union of partial clusterings at geometrically growing radii up to the
    k-center radius. For every ordered norm the result is within
    guarantee(eps, mode) of the best k facilities for that norm.
    """
    k = check_k(k)
    mode = check_mode(mode)
    eps = check_epsilon(eps)
    n = metric.n
    allowed = metric.allowed
    if k >= len(allowed):
        return FacilitySet(allowed, provenance=f"all {len(allowed)} allowed facilities")
    inner = inner_epsilon(eps, mode)
    if inner <= 1.0 / n:
        logger.info(f"slack {inner:g} <= 1/{n}: opening every allowed facility")
        return FacilitySet(allowed, provenance=f"all allowed, eps'={inner:g} <= 1/n")

    top = kcenter_radius(metric, k, mode, cap)
    if top == 0.0:
        radii = [0.0]
    else:
        base = top * inner / n
        radii = [min(base * (1.0 + inner) ** l, top) for l in range(round_count(n, inner))]

    opened, rounds = set(), []
    for R in radii:
        if mode == EXACT:
            chosen = partial_clustering_exhaustive(metric, k, R, cap)
        else:
            chosen = partial_clustering_greedy3(metric, k, R)
        opened.update(chosen)
        rounds.append({"radius": R, "open": list(chosen)})
    result = FacilitySet(opened, provenance=f"{mode} k={k} eps={eps:g}", rounds=rounds)
    logger.info(
        f"iterative clustering ({mode}) n={n} k={k} eps={eps:g}: {len(radii)} radii up to "
        f"{top:g}, {len(result)} facilities"
    )
    return result


def ufl_cost(metric, facilities, w):
    """Opening cost |F| plus the ordered norm of the distance vector."""
    return len(list(facilities)) + ordered_norm(distance_vector(metric, facilities), w)


def ufl_portfolio(metric, cap=None):
    """
    Facility sets for k = 1, 2, 4, ..., 2^ceil(log2 n), each from greedy
    iterative clustering with eps = 1. Duplicate sets are kept once.
    """
    n = metric.n
    levels = math.ceil(math.log2(n)) if n > 1 else 0
    sets = []
    for j in range(levels + 1):
        k = min(2 ** j, len(metric.allowed))
        found = iterative_clustering(metric, k, 1.0, GREEDY3, cap)
        if found not in sets:
            found.provenance = f"k={k}"
            sets.append(found)
    logger.info(f"UFL portfolio n={n}: {len(sets)} facility sets from {levels + 1} values of k")
    return Portfolio(
        [distance_vector(metric, F) for F in sets],
        "O(log n)",
        provenance=[F.provenance for F in sets],
        details=[{"open": list(F), "facilities": len(F)} for F in sets],
        notes=["objective |F| + ||x^F||; the O(log n) constant is asymptotic, ratios are measured only"],
    )
