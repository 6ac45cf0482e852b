# norms/ordered.py
import numpy as np

from equinorm.exceptions import ArgumentError
from norms.vectors import (
    WeightVector,
    as_cost_vector,
    as_weight_vector,
    check_dimensions,
    prefix_sums,
    sort_desc,
)

DEFAULT_TOL = 1e-9


def ordered_norm(x, w):
    """w . x sorted decreasing."""
    x = as_cost_vector(x)
    w = as_weight_vector(w)
    check_dimensions(x, w)
    return float(np.dot(w.entries, sort_desc(x)))


def top_k_norm(x, k):
    x = as_cost_vector(x)
    d = x.size
    if not isinstance(k, (int, np.integer)) or not (1 <= k <= d):
        raise ArgumentError(f"k={k} out of range 1..{d}")
    return ordered_norm(x, WeightVector.top_k(d, int(k)))


def level_boundaries(y_sorted):
    """0-based indices k where a tie block of y ends (y_k > y_{k+1}), plus the last index."""
    d = y_sorted.size
    ends = np.flatnonzero(y_sorted[:-1] > y_sorted[1:])
    return np.append(ends, d - 1)


def dual_ordered_norm(y, w, fast=True):
    """
    max_k top_k(y) / top_k(w). The fast path only evaluates the ends of the
    tie blocks of y sorted decreasing.
    """
    y = as_cost_vector(y)
    w = as_weight_vector(w)
    check_dimensions(y, w)
    ys = sort_desc(y)
    y_prefix = np.cumsum(ys)
    w_prefix = np.cumsum(w.entries)
    if fast:
        idx = level_boundaries(ys)
        return float(np.max(y_prefix[idx] / w_prefix[idx]))
    return float(np.max(y_prefix / w_prefix))


def dual_argmax(y, w, tol=DEFAULT_TOL):
    """0-based k where the dual ratio attains its max (within tol)."""
    y = as_cost_vector(y)
    w = as_weight_vector(w)
    ratios = np.cumsum(sort_desc(y)) / np.cumsum(w.entries)
    best = ratios.max()
    return np.flatnonzero(ratios >= best - tol * (1.0 + best))


def majorizes(x, y, tol=None):
    """True iff x is majorized by y: every top-k sum of x is at most that of y."""
    x = as_cost_vector(x)
    y = as_cost_vector(y)
    check_dimensions(x, y)
    if tol is None:
        tol = DEFAULT_TOL * (1.0 + float(y.sum()))
    return bool(np.all(prefix_sums(x) <= prefix_sums(y) + tol))


def shared_order(x, y):
    """True iff a single permutation sorts both x and y decreasing."""
    order = np.lexsort((-y, -x))
    return bool(np.all(np.diff(y[order]) <= 0.0))


class CauchySchwarzReport:
    def __init__(self, holds, tight, lhs, rhs, witnesses):
        self.holds = holds
        self.tight = tight
        self.lhs = lhs
        self.rhs = rhs
        self.witnesses = witnesses

    def __str__(self):
        return (
            f"||x||_(w) * ||y||*_(w) = {self.lhs:.10g} >= x.y = {self.rhs:.10g}: "
            f"holds={self.holds} tight={self.tight}"
        )


def check_ordered_cauchy_schwarz(x, y, w, tol=DEFAULT_TOL):
    """
    x.y <= ||x||_(w) ||y||*_(w). Equality needs a shared order of x and y, and
    for every k either x sorted has a tie at k or the dual ratio is maximal at k.
    """
    x = as_cost_vector(x)
    y = as_cost_vector(y)
    w = as_weight_vector(w)
    check_dimensions(x, y, w)
    lhs = ordered_norm(x, w) * dual_ordered_norm(y, w)
    rhs = float(np.dot(x, y))
    slack = tol * (1.0 + abs(lhs))
    holds = lhs >= rhs - slack

    xs = sort_desc(x)
    drops = xs - np.append(xs[1:], 0.0)
    maximal = set(dual_argmax(y, w, tol).tolist())
    failing = [
        int(k) for k in range(x.size)
        if drops[k] > tol * (1.0 + xs[0]) and k not in maximal
    ]
    consistent = shared_order(x, y)
    tight = consistent and not failing
    witnesses = {
        "shared_order": consistent,
        "dual_argmax": sorted(maximal),
        "failing_levels": failing,
    }
    return CauchySchwarzReport(holds, tight, lhs, rhs, witnesses)


def sym_guarantee(alpha, d):
    """Symbolic guarantee for all symmetric monotonic norms; the constant is not known."""
    return f"{alpha:g}*C*log({d}) (C unspecified)"
