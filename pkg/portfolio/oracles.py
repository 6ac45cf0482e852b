# portfolio/oracles.py
"""Brute-force minimisation over finite domains and portfolio ratio certificates."""
import logging
import math

import numpy as np

from equinorm.exceptions import ArgumentError
from equinorm.utils import safe_ratio
from norms.vectors import as_weight_vector, all_top_k
from portfolio.domain import FiniteDomain, Portfolio

logger = logging.getLogger(__name__)


def _rows_sorted(matrix):
    return -np.sort(-np.asarray(matrix, dtype=float), axis=1)


def _matrix(obj):
    return obj.matrix if isinstance(obj, (FiniteDomain, Portfolio)) else np.atleast_2d(obj)


def _require_same_dimension(X, D):
    if X.shape[1] != D.shape[1]:
        raise ArgumentError(f"dimension mismatch: portfolio d={X.shape[1]}, domain d={D.shape[1]}")


def brute_force_min_norm(D, w):
    """(vector, value) minimising ||.||_(w) over D; first in list order wins ties."""
    M = _matrix(D)
    w = as_weight_vector(w)
    if len(w) != M.shape[1]:
        raise ArgumentError(f"dimension mismatch: domain d={M.shape[1]}, weights d={len(w)}")
    values = _rows_sorted(M) @ w.entries
    best = int(np.argmin(values))
    return M[best].copy(), float(values[best])


def min_norms(M, weights):
    """Per weight vector, the minimum ordered norm over the rows of M."""
    W = np.vstack([as_weight_vector(w).entries for w in weights])
    return (_rows_sorted(M) @ W.T).min(axis=0)


def certify_topk_ratio(X, D):
    """Exact worst ratio over all top-k norms."""
    PX = np.cumsum(_rows_sorted(_matrix(X)), axis=1).min(axis=0)
    PD = np.cumsum(_rows_sorted(_matrix(D)), axis=1).min(axis=0)
    _require_same_dimension(_matrix(X), _matrix(D))
    return max(safe_ratio(float(a), float(b)) for a, b in zip(PX, PD))


def ratio_table(X, D, weights):
    """[(label, ratio)] for each weight vector."""
    MX, MD = _matrix(X), _matrix(D)
    _require_same_dimension(MX, MD)
    weights = [as_weight_vector(w) for w in weights]
    best_x = min_norms(MX, weights)
    best_d = min_norms(MD, weights)
    return [
        (str(w), safe_ratio(float(a), float(b)))
        for w, a, b in zip(weights, best_x, best_d)
    ]


def estimate_ordered_ratio(X, D, family):
    """
    Worst ratio over the family's weights plus every top-k weight. This is a
    lower bound on the worst case over all ordered norms.
    """
    MX, MD = _matrix(X), _matrix(D)
    _require_same_dimension(MX, MD)
    d = MX.shape[1]
    weights = all_top_k(d) + family.weight_vectors(d)
    ratios = [ratio for _, ratio in ratio_table(MX, MD, weights)]
    worst = max(ratios)
    logger.debug(f"sampled ordered ratio {worst:.6g} over {len(weights)} weights ({family})")
    return worst


def _same_rows(A, B):
    return {tuple(row) for row in np.asarray(A).tolist()} <= {tuple(row) for row in np.asarray(B).tolist()}


def _multiply_alpha(a1, a2):
    if isinstance(a1, str) or isinstance(a2, str):
        return f"({a1})*({a2})"
    return a1 * a2


def compose_sequential(X1, X2):
    """X2 approximates X1 which approximates D: X2 approximates D with the product factor."""
    if not _same_rows(X2.matrix, X1.matrix):
        raise ArgumentError("the second portfolio must be a subset of the first")
    return Portfolio(
        X2.matrix,
        _multiply_alpha(X1.claimed_alpha, X2.claimed_alpha),
        provenance=X2.provenance,
        details=X2.details,
        notes=X1.notes + X2.notes,
    )


def _alphas_match(a1, a2):
    if isinstance(a1, str) or isinstance(a2, str):
        return a1 == a2
    return math.isclose(a1, a2, rel_tol=1e-12)


def union_portfolios(parts):
    """
    Concatenate portfolios built for the pieces of a domain. Parts may be
    Portfolio objects or (Portfolio, subdomain) pairs.
    """
    portfolios = [p[0] if isinstance(p, tuple) else p for p in parts]
    if not portfolios:
        raise ArgumentError("nothing to union")
    alpha = portfolios[0].claimed_alpha
    d = portfolios[0].dimension
    vectors, provenance, details, seen = [], [], [], set()
    notes = []
    for p in portfolios:
        if p.dimension != d:
            raise ArgumentError(f"dimension mismatch in union: {p.dimension} vs {d}")
        if not _alphas_match(p.claimed_alpha, alpha):
            raise ArgumentError(f"claimed alphas differ: {p.claimed_alpha} vs {alpha}")
        notes.extend(n for n in p.notes if n not in notes)
        for row, prov, det in zip(p.matrix, p.provenance, p.details):
            key = tuple(row.tolist())
            if key in seen:
                continue
            seen.add(key)
            vectors.append(row)
            provenance.append(prov)
            details.append(det)
    return Portfolio(vectors, alpha, provenance=provenance, details=details, notes=notes)
