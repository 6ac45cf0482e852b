# satisfaction/satisfiers.py
"""Budgeted satisfier oracles: best coverage subject to cost <= beta * B."""
import itertools
import logging
import math

import numpy as np

from equinorm.exceptions import ArgumentError, NumericError, SizeCapError
from equinorm.utils import brute_force_cap
from satisfaction.ordering import COST_TOL, iterative_ordering
from satisfaction.problems import CompletionTimes, Satisfier, SetCover, Tsp
from solvercore.lp import LinearProgram, solve_lp
from solvercore.matching import max_bipartite_matching

logger = logging.getLogger(__name__)

SUPPORT_TOL = 1e-9


def _within(value, budget):
    return value <= budget * (1.0 + COST_TOL) + COST_TOL


def _require_cap(size, cap, what):
    cap = brute_force_cap() if cap is None else cap
    if size > cap:
        raise SizeCapError(f"{what}: {size} states exceed cap {cap}", size=size, cap=cap)


def _interleave(per_machine):
    """Global order by (position on machine, machine)."""
    keyed = [
        (position, machine, obj)
        for machine, objs in enumerate(per_machine)
        for position, obj in enumerate(objs)
    ]
    return Satisfier(obj for _, _, obj in sorted(keyed))


def _set_cover_exhaustive(problem, B, cap):
    k = min(int(math.floor(B + COST_TOL)), len(problem.objects))
    if k <= 0:
        return Satisfier()
    _require_cap(math.comb(len(problem.objects), k), cap, "set choices")
    best, best_size = (), -1
    for choice in itertools.combinations(problem.objects, k):
        size = len(frozenset().union(*(problem.sets[x] for x in choice)))
        if size > best_size:
            best, best_size = choice, size
            if size == problem.num_clients:
                break
    return Satisfier(best)


def _completion_times_exhaustive(problem, B, cap):
    n, d = problem.p.shape
    _require_cap((d + 1) ** n, cap, "partial assignments")
    best, best_count = None, -1
    for assignment in itertools.product(range(-1, d), repeat=n):
        loads = np.zeros(d)
        for j, i in enumerate(assignment):
            if i >= 0:
                loads[i] += problem.p[j, i]
        if not all(_within(load, B) for load in loads):
            continue
        count = sum(1 for i in assignment if i >= 0)
        if count > best_count:
            best, best_count = assignment, count
    per_machine = [[] for _ in range(d)]
    for j, i in enumerate(best):
        if i >= 0:
            per_machine[i].append((j, i))
    for objs in per_machine:
        # shortest first
        objs.sort(key=lambda obj: (problem.p[obj], obj[0]))
    return _interleave(per_machine)


def _tsp_exhaustive(problem, B, cap):
    """Held-Karp over vertex subsets: most vertices on a v0-path of length <= B."""
    others = [v for v in problem.objects if v != problem.v0]
    k = len(others)
    if k == 0:
        return Satisfier([problem.v0])
    _require_cap(k * k * (1 << k), cap, "path states")
    dist = problem.dist
    best = np.full((1 << k, k), math.inf)
    parent = np.full((1 << k, k), -1, dtype=np.int64)
    for a in range(k):
        best[1 << a, a] = dist[problem.v0, others[a]]
    for mask in range(1, 1 << k):
        for last in range(k):
            length = best[mask, last]
            if not math.isfinite(length) or not _within(length, B):
                continue
            for nxt in range(k):
                if mask & (1 << nxt):
                    continue
                extended = length + dist[others[last], others[nxt]]
                target = mask | (1 << nxt)
                if extended < best[target, nxt]:
                    best[target, nxt] = extended
                    parent[target, nxt] = last

    choice, choice_key = None, (0, 0.0)
    for mask in range(1, 1 << k):
        last = int(np.argmin(best[mask]))
        length = best[mask, last]
        if not _within(length, B):
            continue
        key = (bin(mask).count("1"), -length)
        if key > choice_key:
            choice, choice_key = (mask, last), key
    if choice is None:
        return Satisfier([problem.v0])
    path = []
    mask, last = choice
    while last >= 0:
        path.append(others[last])
        previous = int(parent[mask, last])
        mask ^= 1 << last
        last = previous
    return Satisfier([problem.v0] + path[::-1])


def exhaustive_satisfier(problem, B, cap=None):
    """A (1, B)-satisfier by exhaustive search."""
    if B < 0:
        raise ArgumentError(f"budget must be nonnegative, got {B}")
    if isinstance(problem, SetCover):
        return _set_cover_exhaustive(problem, B, cap)
    if isinstance(problem, CompletionTimes):
        return _completion_times_exhaustive(problem, B, cap)
    if isinstance(problem, Tsp):
        return _tsp_exhaustive(problem, B, cap)
    raise ArgumentError(f"no exhaustive satisfier for {type(problem).__name__}")


def _partial_schedule_lp(problem, B):
    n, d = problem.p.shape
    variables = [(j, i) for j in range(n) for i in range(d) if problem.p[j, i] <= B]
    if not variables:
        return variables, np.zeros(0), 0.0
    rows, rhs = [], []
    for i in range(d):
        rows.append([problem.p[j, m] if m == i else 0.0 for j, m in variables])
        rhs.append(B)
    for j in range(n):
        rows.append([1.0 if job == j else 0.0 for job, _ in variables])
        rhs.append(1.0)
    lp = LinearProgram(np.ones(len(variables)), rows, rhs, sense="max")
    result = solve_lp(lp)
    if not result.is_optimal:
        raise NumericError(f"partial scheduling LP ended {result.status}")
    return variables, np.clip(result.x, 0.0, 1.0), float(result.value)


def completion_times_satisfier(problem, B):
    """
    A (2, B)-satisfier for completion times: solve the partial scheduling LP,
    spread each machine's fractional jobs (longest first) over unit slots and
    take a maximum matching between slots and jobs.
    """
    if not isinstance(problem, CompletionTimes):
        raise ArgumentError(f"LP rounding needs a completion-times problem, got {type(problem).__name__}")
    if B < 0:
        raise ArgumentError(f"budget must be nonnegative, got {B}")
    n, d = problem.p.shape
    variables, x, value = _partial_schedule_lp(problem, B)

    slot_machine, edges = [], []
    for i in range(d):
        support = [(problem.p[j, i], j, x[k]) for k, (j, m) in enumerate(variables)
                   if m == i and x[k] > SUPPORT_TOL]
        support.sort(key=lambda item: (-item[0], item[1]))
        fill = 1.0
        for _, j, weight in support:
            while weight > SUPPORT_TOL:
                if fill >= 1.0 - SUPPORT_TOL:
                    slot_machine.append(i)
                    fill = 0.0
                take = min(weight, 1.0 - fill)
                edges.append((len(slot_machine) - 1, j))
                fill += take
                weight -= take

    matching = max_bipartite_matching(edges, len(slot_machine), n)
    if len(matching) < value - 1e-6:
        raise NumericError(f"matching of size {len(matching)} below LP value {value:.6g}")
    per_machine = [[] for _ in range(d)]
    for slot, j in sorted(matching):
        per_machine[slot_machine[slot]].append((j, slot_machine[slot]))
    sat = _interleave(per_machine)
    loads = [sum(problem.p[obj] for obj in objs) for objs in per_machine]
    if loads and max(loads) > 2.0 * B * (1.0 + 1e-7) + 1e-9:
        raise NumericError(f"rounded makespan {max(loads):g} above 2B = {2.0 * B:g}")
    logger.debug(f"LP value {value:.4g} at B={B:g}: scheduled {len(matching)} jobs")
    return sat


def greedy_set_cover_satisfier(problem, B):
    """floor(B) sets picked by largest new coverage; no (beta, B) guarantee."""
    if not isinstance(problem, SetCover):
        raise ArgumentError(f"greedy coverage needs a set cover problem, got {type(problem).__name__}")
    chosen, covered = [], set()
    for _ in range(min(int(math.floor(B + COST_TOL)), len(problem.objects))):
        gains = [(len(problem.sets[x] - covered), -k) for k, x in enumerate(problem.objects) if x not in chosen]
        gain, neg_k = max(gains)
        if gain == 0:
            break
        x = problem.objects[-neg_k]
        chosen.append(x)
        covered |= problem.sets[x]
    return Satisfier(chosen)


EXHAUSTIVE = "exhaustive"
LP_ROUNDING = "lp"
GREEDY = "greedy"

ORACLES = {
    EXHAUSTIVE: (exhaustive_satisfier, 1.0, False),
    LP_ROUNDING: (completion_times_satisfier, 2.0, False),
    GREEDY: (greedy_set_cover_satisfier, 1.0, True),
}


def order_problem(problem, method=EXHAUSTIVE):
    try:
        oracle, beta, heuristic = ORACLES[method]
    except KeyError:
        raise ArgumentError(f"unknown satisfier {method!r}; choose from {sorted(ORACLES)}")
    return iterative_ordering(problem, oracle, beta=beta, heuristic=heuristic)
