# satisfaction/certificates.py
import itertools
import logging
import math

import numpy as np

from equinorm.exceptions import ArgumentError, SizeCapError
from equinorm.utils import brute_force_cap, safe_ratio
from norms.vectors import as_weight_vector
from portfolio.domain import FiniteDomain
from satisfaction.ordering import satisfaction_vector
from satisfaction.problems import CompletionTimes, Satisfier, SetCover, Tsp

logger = logging.getLogger(__name__)


def _order_count(problem):
    if isinstance(problem, SetCover):
        return math.factorial(len(problem.objects))
    if isinstance(problem, Tsp):
        return math.factorial(len(problem.objects) - 1)
    if isinstance(problem, CompletionTimes):
        n, d = problem.p.shape
        return d ** n * math.factorial(n)
    raise ArgumentError(f"cannot enumerate orders of {type(problem).__name__}")


def _schedules(problem):
    n, d = problem.p.shape
    for assignment in itertools.product(range(d), repeat=n):
        machines = [[j for j in range(n) if assignment[j] == i] for i in range(d)]
        for orders in itertools.product(*(itertools.permutations(jobs) for jobs in machines)):
            per_machine = [[(j, i) for j in jobs] for i, jobs in enumerate(orders)]
            yield Satisfier(obj for objs in per_machine for obj in objs)


def brute_force_orders(problem, cap=None):
    """
    Every complete satisfier that can be optimal for some norm: all orders of
    all sets, all v0-first tours, all schedules with each job placed once.
    """
    cap = brute_force_cap() if cap is None else cap
    count = _order_count(problem)
    if count > cap:
        raise SizeCapError(f"{count} orders exceed cap {cap}", size=count, cap=cap)
    if isinstance(problem, SetCover):
        return [Satisfier(order) for order in itertools.permutations(problem.objects)]
    if isinstance(problem, Tsp):
        others = [v for v in problem.objects if v != problem.v0]
        return [Satisfier((problem.v0,) + order) for order in itertools.permutations(others)]
    return list(_schedules(problem))


def satisfaction_domain(problem, cap=None):
    """Distinct satisfaction vectors of every brute-force order, as a finite domain."""
    rows, labels, seen = [], [], set()
    for sat in brute_force_orders(problem, cap):
        vector = satisfaction_vector(problem, sat)
        key = tuple(vector.tolist())
        if key in seen:
            continue
        seen.add(key)
        rows.append(vector)
        labels.append(str(sat.to_json()))
    logger.debug(f"{problem}: {len(rows)} distinct satisfaction vectors")
    return FiniteDomain(rows, labels)


def pointwise_factor(problem, sat, domain=None):
    """
    Largest ratio between the i-th smallest satisfaction time of sat and the
    i-th smallest time of any competitor.
    """
    domain = satisfaction_domain(problem) if domain is None else domain
    mine = np.sort(satisfaction_vector(problem, sat))
    others = np.sort(domain.matrix, axis=1)
    return max(
        safe_ratio(float(a), float(b))
        for row in others
        for a, b in zip(mine, row)
    )


def best_simultaneous_ratio(problem, weights, domain=None):
    """
    min over complete satisfiers of the worst ratio to the per-norm optimum,
    over the given weight vectors. Returns (ratio, label of the best satisfier).
    """
    domain = satisfaction_domain(problem) if domain is None else domain
    W = np.vstack([as_weight_vector(w).entries for w in weights])
    values = -np.sort(-domain.matrix, axis=1) @ W.T
    optima = values.min(axis=0)
    worst = [
        max(safe_ratio(float(v), float(o)) for v, o in zip(row, optima))
        for row in values
    ]
    best = int(np.argmin(worst))
    return worst[best], domain.labels[best]


def earliest_satisfaction_vector(problem):
    """
    Per client, the least earliest_time over the objects that satisfy it. Every
    satisfier's satisfaction vector dominates it entrywise.
    """
    bound = {c: math.inf for c in problem.clients}
    for x in problem.objects:
        t = problem.earliest_time(x)
        for c in problem.satisfies(x):
            if t < bound[c]:
                bound[c] = t
    return np.array([bound[c] for c in problem.clients])
