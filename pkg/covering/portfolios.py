# covering/portfolios.py
import logging

import numpy as np

from equinorm.exceptions import ArgumentError, InfeasibleError
from equinorm.utils import check_epsilon
from norms.ordered import dual_ordered_norm
from norms.vectors import as_weight_vector
from portfolio.domain import Portfolio
from solvercore.arrangement import AUTO
from solvercore.ordered_lp import minimize_ordered_norm

from covering.orders import enumerate_reduced_orders, vertices_for_order
from covering.polyhedron import distinct_row_values, group_columns, row_value_bound, sparsify

logger = logging.getLogger(__name__)

SIMPLEX_TOL = 1e-9


def build_portfolio(P, eps, mode=AUTO, samples=100_000, seed=0):
    """
    Union over the reduced orders of the vertices of the order-restricted
    polyhedron, computed on the sparsified rows. When sparsifying does not
    merge any columns the original rows are used and the portfolio is exact
    over P.
    """
    eps = check_epsilon(eps)
    notes = []
    plain = group_columns(P)
    sparse = sparsify(P, eps)
    grouped = group_columns(sparse)
    if grouped.m < plain.m:
        target, groups = sparse, grouped
        notes.append(
            f"sparsified: at most {distinct_row_values(sparse)} distinct values per row "
            f"(bound {row_value_bound(P.d, eps)})"
        )
    else:
        target, groups = P, plain
        notes.append("sparsifying merges no columns; working on the original rows")
    logger.info(f"covering portfolio r={P.r} d={P.d}: {groups}")

    orders = enumerate_reduced_orders(target, groups, mode=mode, samples=samples, seed=seed)
    vectors, provenance, details, seen = [], [], [], set()
    for order in orders:
        vertices = vertices_for_order(target, groups, order)
        for z, x in vertices:
            key = tuple(np.round(x, 9).tolist())
            if key in seen:
                continue
            seen.add(key)
            vectors.append(x)
            provenance.append(f"order{list(order)}")
            details.append({"order": list(order), "z": z.tolist()})
    if not vectors:
        raise InfeasibleError("no vertex found for any reduced order")

    notes.append(f"{len(orders)} reduced orders over {groups.m} column groups")
    if not orders.exact:
        notes.append("reduced orders were sampled and may be incomplete")
    logger.info(f"covering portfolio: {len(vectors)} vectors from {len(orders)} orders")
    return Portfolio(vectors, 1.0 + eps, provenance=provenance, details=details, notes=notes)


def lp_min_ordered_norm(P, w):
    """(x, value) minimising ||x||_(w) over the polyhedron."""
    w = as_weight_vector(w)
    if len(w) != P.d:
        raise ArgumentError(f"weights of length {len(w)} for dimension {P.d}")
    result = minimize_ordered_norm(w, A_ub=-P.A, b_ub=-np.ones(P.r))
    if not result.is_optimal:
        raise InfeasibleError(f"ordered-norm LP over {P} ended {result.status}")
    return result.x, float(result.value)


def dual_objective(P, lam, w):
    """||A^T lambda||*_(w) for lambda in the simplex."""
    lam = np.asarray(lam, dtype=float).ravel()
    if lam.size != P.r:
        raise ArgumentError(f"lambda of length {lam.size} for {P.r} rows")
    if np.any(lam < -SIMPLEX_TOL) or abs(lam.sum() - 1.0) > SIMPLEX_TOL:
        raise ArgumentError(f"lambda {lam.tolist()} is not in the simplex")
    lam = np.clip(lam, 0.0, None)
    return dual_ordered_norm(P.A.T @ lam, w)
