# satisfaction/ordering.py
"""Satisfaction times, composition and the budget-doubling ordering loop."""
import logging
import math

import numpy as np

from equinorm.exceptions import ArgumentError, NonterminationError, PreconditionError
from portfolio.domain import Portfolio
from satisfaction.problems import Satisfier

logger = logging.getLogger(__name__)

COST_TOL = 1e-9


def satisfaction_times(problem, sat):
    """client -> earliest time of a satisfying object; unsatisfied clients get inf."""
    times = problem.times(sat)
    result = {c: math.inf for c in problem.clients}
    for x, t in times.items():
        for c in problem.satisfies(x):
            if t < result[c]:
                result[c] = t
    return result


def satisfaction_vector(problem, sat):
    times = satisfaction_times(problem, sat)
    return np.array([times[c] for c in problem.clients])


def satisfied_clients(problem, sat):
    problem.check(sat)
    covered = set()
    for x in sat:
        covered |= problem.satisfies(x)
    return covered


def cost(problem, sat):
    """Largest object time; 0 for the empty satisfier."""
    times = problem.times(sat)
    return max(times.values()) if times else 0.0


def compose(sats):
    """First order, then the unseen objects of the second, and so on."""
    order, seen = [], set()
    for sat in sats:
        for x in sat:
            if x not in seen:
                seen.add(x)
                order.append(x)
    return Satisfier(order)


def truncate(problem, sat, T):
    """Objects with time <= T, in their original order."""
    times = problem.times(sat)
    return Satisfier(x for x in sat if times[x] <= T)


def check_downward_closure(problem, sat, T, tol=COST_TOL):
    before = problem.times(sat)
    after = problem.times(truncate(problem, sat, T))
    return all(t <= before[x] + tol * (1.0 + abs(before[x])) for x, t in after.items())


def check_composability(problem, sats, gamma=None, tol=COST_TOL):
    """Each new object's composed time is within gamma times the earlier costs plus its own time."""
    gamma = problem.gamma if gamma is None else gamma
    composed = problem.times(compose(sats))
    earlier, seen = 0.0, set()
    for sat in sats:
        own = problem.times(sat)
        for x in sat:
            if x in seen:
                continue
            seen.add(x)
            bound = gamma * earlier + own[x]
            if composed[x] > bound + tol * (1.0 + abs(bound)):
                logger.debug(f"object {x}: composed time {composed[x]} above {bound}")
                return False
        earlier += cost(problem, sat)
    return True


class OrderingRun:
    """Result of iterative_ordering: the composed satisfier and one record per round."""

    def __init__(self, problem, satisfier, rounds, beta, scale, heuristic=False):
        self.problem = problem
        self.satisfier = satisfier
        self.rounds = rounds
        self.beta = beta
        self.scale = scale
        self.heuristic = heuristic

    @property
    def theta(self):
        return math.sqrt(self.problem.gamma) + 1.0

    @property
    def factor(self):
        return self.beta * self.theta ** 2

    @property
    def claimed_alpha(self):
        return f"heuristic (beta unknown) x {self.theta ** 2:g}" if self.heuristic else self.factor

    def satisfaction_vector(self):
        return satisfaction_vector(self.problem, self.satisfier)

    def as_portfolio(self):
        return Portfolio(
            [self.satisfaction_vector()],
            self.claimed_alpha,
            provenance=["iterative_ordering"],
            details=[{"order": self.satisfier.to_json()}],
            notes=[f"{len(self.rounds)} rounds, budgets scaled by {self.scale:g}"],
        )

    def to_json(self):
        return {
            "order": self.satisfier.to_json(),
            "beta": self.beta,
            "theta": self.theta,
            "claimed_alpha": self.claimed_alpha,
            "scale": self.scale,
            "rounds": self.rounds,
        }

    def __str__(self):
        return f"ordering of {len(self.satisfier)} objects in {len(self.rounds)} rounds"


def iterative_ordering(problem, oracle, beta=1.0, heuristic=False):
    """
    Call oracle(problem, B) with budgets B = scale * theta^j, theta =
    sqrt(gamma) + 1, until every client is satisfied, and compose the answers.
    scale is the smallest positive cost of the problem.
    """
    if beta < 1.0:
        raise ArgumentError(f"beta must be >= 1, got {beta}")
    theta = math.sqrt(problem.gamma) + 1.0
    scale = problem.min_positive_cost()
    limit = theta ** 2 * problem.cost_upper_bound()
    target = set(problem.clients)
    covered, sats, rounds = set(), [], []
    j = 0
    while covered != target:
        budget = scale * theta ** j
        if budget > limit:
            raise NonterminationError(
                f"{len(target - covered)} clients still unsatisfied at budget {budget:g} > {limit:g}"
            )
        sat = problem.check(oracle(problem, budget))
        spent = cost(problem, sat)
        if spent > beta * budget * (1.0 + COST_TOL):
            raise PreconditionError(f"oracle spent {spent:g} on budget {budget:g} with beta {beta:g}")
        gained = satisfied_clients(problem, sat)
        logger.debug(f"round {j}: budget {budget:g}, cost {spent:g}, {len(gained)} clients")
        sats.append(sat)
        covered |= gained
        rounds.append({"budget": budget, "cost": spent, "clients": len(gained)})
        j += 1
    satisfier = compose(sats)
    logger.info(f"{problem}: {len(rounds)} rounds, factor {beta * theta ** 2:g}")
    return OrderingRun(problem, satisfier, rounds, beta, scale, heuristic=heuristic)
