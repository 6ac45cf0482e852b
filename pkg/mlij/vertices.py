# mlij/vertices.py
import logging
import math

import numpy as np

from equinorm.exceptions import ArgumentError, InfeasibleError, PreconditionError
from mlij.instance import Schedule
from norms.vectors import as_weight_vector
from solvercore.ordered_lp import minimize_ordered_norm

logger = logging.getLogger(__name__)

GOOD_TOL = 1e-12
SNAP_TOL = 1e-9


def _check_index(inst, l):
    if not (1 <= l <= inst.d):
        raise ArgumentError(f"vertex index {l} out of range 1..{inst.d}")


def vertex_level(inst, l):
    """Common value n / sum_{i<=l} 1/p_i of the first l loads."""
    _check_index(inst, l)
    return inst.n / float(np.sum(1.0 / inst.p[:l]))


def vertex(inst, l):
    """Fractional vertex x(l) in sorted machine order."""
    x = np.zeros(inst.d)
    x[:l] = vertex_level(inst, l)
    return x


def is_good_vertex(inst, l):
    return vertex_level(inst, l) >= inst.p[l - 1] * (1.0 - GOOD_TOL)


def max_good_index(inst):
    L = 1
    while L < inst.d and is_good_vertex(inst, L + 1):
        L += 1
    return L


def round_good_vertex(inst, l):
    """
    Integral schedule next to x(l): every machine gets floor or ceil of its
    fractional job count, and the machines with the largest fractional
    parts (lower index first on ties) are rounded up.
    """
    if not is_good_vertex(inst, l):
        raise PreconditionError(f"x({l}) is not a good vertex of {inst}")
    level = vertex_level(inst, l)
    fractional = level / inst.p[:l]
    nearest = np.round(fractional)
    snap = np.abs(fractional - nearest) <= SNAP_TOL * np.maximum(1.0, nearest)
    fractional = np.where(snap, nearest, fractional)

    counts = np.floor(fractional).astype(np.int64)
    missing = inst.n - int(counts.sum())
    if missing < 0 or missing > l:
        raise InfeasibleError(f"rounding x({l}) left {missing} jobs unplaced")
    parts = fractional - counts
    up = np.lexsort((np.arange(l), -parts))[:missing]
    counts[up] += 1

    sorted_counts = np.zeros(inst.d, dtype=np.int64)
    sorted_counts[:l] = counts
    logger.debug(f"rounded x({l}) of {inst}: {missing} machines rounded up")
    return Schedule(inst.to_original(sorted_counts))


def lp_relaxation(inst, w):
    """
    Fractional optimum of min ||x||_(w) over sum_i x_i / p_i = n, x >= 0.
    Returns (x in sorted machine order, value).
    """
    w = as_weight_vector(w)
    if len(w) != inst.d:
        raise ArgumentError(f"weights of length {len(w)} for {inst.d} machines")
    result = minimize_ordered_norm(w, A_eq=[1.0 / inst.p], b_eq=[float(inst.n)])
    if not result.is_optimal:
        raise InfeasibleError(f"relaxation of {inst} ended {result.status}")
    return result.x, result.value


def balanced_load_bound(inst, w):
    """w_1 times the equal-load makespan n / sum(1/p_i); no schedule's norm is smaller."""
    w = as_weight_vector(w)
    if len(w) != inst.d:
        raise ArgumentError(f"weights of length {len(w)} for {inst.d} machines")
    return float(w.entries[0] * inst.n / np.sum(1.0 / inst.p))


def selected_indices(L, alpha):
    """l_j = min(ceil((alpha/4)^j), L) for j = 0..ceil(log_{alpha/4} L), deduplicated."""
    c = alpha / 4.0
    J = math.ceil(math.log(L) / math.log(c) - 1e-12) if L > 1 else 0
    chosen = []
    for j in range(J + 1):
        l = min(math.ceil(c ** j - 1e-9), L)
        if l not in chosen:
            chosen.append(l)
    return chosen
