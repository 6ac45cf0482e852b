# covering/orders.py
import itertools
import logging
import math

import numpy as np

from equinorm.exceptions import ArgumentError, NumericError, SizeCapError
from equinorm.utils import brute_force_cap
from solvercore.arrangement import AUTO, arrangement_regions, region_bound
from solvercore.linalg import solve_square_system

logger = logging.getLogger(__name__)

VERTEX_SLACK = 1e-8


class ReducedOrders:
    """Group orders realised by A^T lambda over the simplex."""

    def __init__(self, orders, exact, num_hyperplanes, r):
        self.orders = list(orders)
        self.exact = exact
        self.num_hyperplanes = num_hyperplanes
        self.r = r

    @property
    def bound(self):
        return region_bound(self.num_hyperplanes, self.r)

    def __len__(self):
        return len(self.orders)

    def __iter__(self):
        return iter(self.orders)

    def __contains__(self, order):
        return tuple(order) in self.orders

    def __str__(self):
        label = "exact" if self.exact else "sampled"
        return f"{len(self)} reduced orders ({label}, bound {self.bound})"


def _order_at(values):
    return tuple(np.argsort(-values, kind="stable").tolist())


def enumerate_reduced_orders(P, groups, mode=AUTO, samples=100_000, seed=0):
    """
    One strict order per region of the arrangement of {lambda : (A^T lambda)_l
    = (A^T lambda)_l'} over pairs of groups, restricted to the simplex.
    """
    C = P.A[:, groups.reps]
    m, r = groups.m, P.r
    if m == 1:
        return ReducedOrders([(0,)], True, 0, r)
    pairs = list(itertools.combinations(range(m), 2))
    hyperplanes = np.array([C[:, a] - C[:, b] for a, b in pairs])
    regions = arrangement_regions(hyperplanes, r, mode=mode, samples=samples, seed=seed)
    orders = []
    for lam in regions:
        order = _order_at(lam @ C)
        if order not in orders:
            orders.append(order)
    result = ReducedOrders(orders, regions.exact, regions.num_hyperplanes, r)
    if len(result) > result.bound:
        raise NumericError(f"{len(result)} orders exceed the region bound {result.bound}")
    logger.info(f"enumerated {result} over m={m} groups, r={r}")
    return result


def _order_system(B, order):
    """Covering rows B z >= 1 stacked with z_rho(1) >= ... >= z_rho(m) >= 0."""
    r, m = B.shape
    chain = np.zeros((m, m))
    for k in range(m - 1):
        chain[k, order[k]] = 1.0
        chain[k, order[k + 1]] = -1.0
    chain[m - 1, order[m - 1]] = 1.0
    G = np.vstack([B, chain])
    h = np.concatenate([np.ones(r), np.zeros(m)])
    return G, h


def vertices_for_order(P, groups, order, cap=None):
    """
    Vertices of the reduced polyhedron restricted to the chain of order,
    expanded back to R^d. Each vertex has m tight rows among the r covering
    rows and the m chain rows.
    """
    m = groups.m
    if sorted(order) != list(range(m)):
        raise ArgumentError(f"{order} is not an order of {m} groups")
    B = P.A[:, groups.reps] * groups.sizes
    G, h = _order_system(B, order)
    total = math.comb(G.shape[0], m)
    cap = brute_force_cap() if cap is None else cap
    if total > cap:
        raise SizeCapError(f"{total} tight-row choices exceed cap {cap}", size=total, cap=cap)

    found, seen = [], set()
    for rows in itertools.combinations(range(G.shape[0]), m):
        rows = list(rows)
        solution = solve_square_system(G[rows], h[rows])
        if not solution:
            continue
        z = solution.x
        if np.any(G @ z - h < -VERTEX_SLACK * (1.0 + np.abs(z).max())):
            continue
        z = np.where(z < 1e-12, 0.0, z)
        key = tuple(np.round(z, 9).tolist())
        if key in seen:
            continue
        seen.add(key)
        found.append(z)
    logger.debug(f"order {order}: {len(found)} vertices from {total} tight-row choices")
    return [(z, groups.expand(z)) for z in found]
