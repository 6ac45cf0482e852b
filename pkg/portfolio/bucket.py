# portfolio/bucket.py
import logging
import math

import numpy as np

from equinorm.utils import check_epsilon
from portfolio.domain import Portfolio

logger = logging.getLogger(__name__)


def bucket_thresholds(d, eps):
    """
    Prefix lengths c_i = floor((1+eps/3)^i), i = 0..T, refined so consecutive
    thresholds c < c' satisfy c' - 1 <= (1+eps/3) c. 1-based.
    """
    q = 1.0 + eps / 3.0
    T = math.ceil(math.log(d) / math.log(q)) if d > 1 else 0
    thresholds = {min(d, math.floor(q ** i)) for i in range(T + 1)}
    c = 1
    while c < d:
        thresholds.add(c)
        c = max(c + 1, math.floor(q * c) + 1)
    thresholds.add(min(c, d))
    return sorted(t for t in thresholds if 1 <= t <= d)


def bucket_portfolio(D, eps):
    """
    One representative per majorization bucket of the vectors whose max entry
    is within d times the smallest max entry. Every vector of the domain has a
    representative that (1+eps)-majorizes it and vice versa.
    """
    eps = check_epsilon(eps)
    M = D.matrix
    n, d = M.shape
    sorted_rows = -np.sort(-M, axis=1)
    maxima = sorted_rows[:, 0]
    v_star = float(maxima.min())
    minimizer = int(np.argmin(maxima))
    notes = []

    if v_star == 0.0:
        notes.append("domain contains the zero vector, which is optimal for every norm")
        return Portfolio(
            [M[minimizer]], 1.0 + eps, provenance=[D.labels[minimizer]],
            details=[{"bucket": []}], notes=notes,
        )

    kept = np.flatnonzero(maxima <= d * v_star * (1.0 + 1e-12))
    if minimizer not in kept:
        kept = np.append(kept, minimizer)
    if len(kept) == 1 and n > 1:
        notes.append("restriction to max entry <= d*v* left only the L-infinity minimizer")
        logger.warning(f"bucket restriction kept only vector {D.labels[minimizer]}")

    q = 1.0 + eps / 3.0
    thresholds = bucket_thresholds(d, eps)
    prefix = np.cumsum(sorted_rows, axis=1)
    buckets = {}
    for i in kept:
        tops = prefix[i, [t - 1 for t in thresholds]]
        key = tuple(int(math.floor(math.log(t / v_star) / math.log(q) + 1e-12)) for t in tops)
        candidate = tuple(sorted_rows[i].tolist())
        current = buckets.get(key)
        if current is None or candidate < current[0]:
            buckets[key] = (candidate, int(i))

    order = sorted(buckets, key=lambda k: buckets[k][0])
    chosen = [buckets[k][1] for k in order]
    logger.info(
        f"bucket portfolio: {len(chosen)} buckets from {len(kept)} of {n} vectors "
        f"(d={d}, eps={eps}, {len(thresholds)} thresholds)"
    )
    return Portfolio(
        M[chosen],
        1.0 + eps,
        provenance=[D.labels[i] for i in chosen],
        details=[{"bucket": list(k)} for k in order],
        notes=notes,
    )
