# equinorm/utils.py
import math

import numpy as np
from django.conf import settings

from equinorm.exceptions import ArgumentError


def resolve_seed(seed=None):
    """EQUINORM_SEED wins over any seed passed on the command line."""
    if settings.EQUINORM_SEED is not None:
        return settings.EQUINORM_SEED
    return 0 if seed is None else int(seed)


def make_rng(seed=0):
    return np.random.default_rng(seed)


def brute_force_cap():
    return settings.EQUINORM_MAX_BRUTE


def relative_close(a, b, tol=1e-9):
    if math.isinf(a) or math.isinf(b):
        return a == b
    return abs(a - b) <= tol * (1.0 + max(abs(a), abs(b)))


def check_epsilon(eps):
    """Approximation slack must lie in (0, 1]."""
    try:
        eps = float(eps)
    except (TypeError, ValueError):
        raise ArgumentError(f"epsilon must be a number, got {eps!r}")
    if not (0.0 < eps <= 1.0):
        raise ArgumentError(f"epsilon must lie in (0, 1], got {eps}")
    return eps


def safe_ratio(numerator, denominator):
    """Portfolio ratio with 0/0 = 1 and c/0 = inf."""
    if denominator <= 0.0:
        return 1.0 if numerator <= 0.0 else math.inf
    return numerator / denominator


def dimension_cap():
    return settings.EQUINORM_MAX_DIMENSION


def cluster_subset_cap():
    return settings.EQUINORM_MAX_CLUSTER_SUBSETS
