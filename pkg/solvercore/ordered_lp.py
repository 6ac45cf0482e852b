# solvercore/ordered_lp.py
import logging

import numpy as np

from norms.vectors import as_weight_vector
from solvercore.lp import LinearProgram, LpResult, solve_lp

logger = logging.getLogger(__name__)


def weight_levels(w):
    """1-based k with w_k > w_{k+1} (w_{d+1} = 0) and the drop at each."""
    entries = as_weight_vector(w).entries
    drops = entries - np.append(entries[1:], 0.0)
    ks = np.flatnonzero(drops > 0.0)
    return ks + 1, drops[ks]


def minimize_ordered_norm(w, A_ub=None, b_ub=None, A_eq=None, b_eq=None):
    """
    min ||x||_(w) over x >= 0 with the given rows, as one LP. The norm is
    the drop-weighted sum of top-k norms at the levels of w, and each top-k
    norm is k t + sum_i max(0, x_i - t) with its own t and slack vector.
    The returned LpResult carries only the x part.
    """
    w = as_weight_vector(w)
    d = len(w)
    ks, drops = weight_levels(w)
    K = ks.size
    n_vars = d + K * (1 + d)

    c = np.zeros(n_vars)
    rows = []
    for j, (k, drop) in enumerate(zip(ks, drops)):
        t = d + j * (1 + d)
        c[t] = drop * k
        c[t + 1:t + 1 + d] = drop
        # x_i - t_j - u_ji <= 0
        block = np.zeros((d, n_vars))
        block[:, :d] = np.eye(d)
        block[:, t] = -1.0
        block[:, t + 1:t + 1 + d] = -np.eye(d)
        rows.append(block)

    def widen(A):
        if A is None:
            return None
        A = np.atleast_2d(np.asarray(A, dtype=float))
        wide = np.zeros((A.shape[0], n_vars))
        wide[:, :d] = A
        return wide

    ub_rows = np.vstack(rows)
    ub_rhs = np.zeros(ub_rows.shape[0])
    if A_ub is not None:
        ub_rows = np.vstack([ub_rows, widen(A_ub)])
        ub_rhs = np.concatenate([ub_rhs, np.asarray(b_ub, dtype=float).ravel()])

    lp = LinearProgram(c, ub_rows, ub_rhs, widen(A_eq), b_eq)
    result = solve_lp(lp)
    logger.debug(f"ordered-norm LP over d={d} with {K} levels: {result}")
    if not result.is_optimal:
        return result
    x = np.maximum(result.x[:d], 0.0)
    return LpResult(result.status, x=x, value=result.value, iterations=result.iterations)
