# portfolio/hard_instances.py
import itertools
import logging
import math

import numpy as np

from equinorm.exceptions import ArgumentError, NumericError, SizeCapError
from norms.vectors import WeightVector
from portfolio.domain import FiniteDomain
from solvercore.matching import BipartiteGraph, HopcroftKarp, alternating_reachable, max_bipartite_matching

logger = logging.getLogger(__name__)

FULL_COMPARABILITY_LEVELS = 10
EXACT_ANTICHAIN_LEVELS = 16


class AntichainInstance:
    def __init__(self, domain, weights, antichain, exact, S, L):
        self.domain = domain
        self.weights = weights
        self.antichain = antichain
        self.exact = exact
        self.S = S
        self.L = L

    def __iter__(self):
        # unpacks as (domain, weights, antichain)
        return iter((self.domain, self.weights, self.antichain))

    def __str__(self):
        label = "maximum" if self.exact else "rank level, not certified maximum"
        return (
            f"antichain instance L={self.L} S={self.S} d={self.domain.dimension}: "
            f"{len(self.antichain)} sequences ({label})"
        )


def step_sequences(L):
    """All (a_0..a_L) with a_0 = 0 and unit-or-zero steps, in lexicographic order of the steps."""
    return [
        (0,) + tuple(itertools.accumulate(steps))
        for steps in itertools.product((0, 1), repeat=L)
    ]


def is_antichain(sequences):
    for a, b in itertools.permutations(sequences, 2):
        if all(x <= y for x, y in zip(a, b)):
            return False
    return True


def maximum_antichain(sequences):
    """
    Maximum antichain of the componentwise order via Dilworth/Konig: a maximum
    matching in the strict-comparability bipartite graph, then the elements
    whose left copy is reachable and right copy is not.
    """
    A = np.asarray(sequences)
    leq = np.all(A[:, None, :] <= A[None, :, :], axis=2)
    np.fill_diagonal(leq, False)
    edges = [(int(i), int(j)) for i, j in zip(*np.nonzero(leq))]
    n = len(sequences)
    graph = BipartiteGraph(n, n, edges)
    matcher = HopcroftKarp(graph)
    matcher.run()
    left, right = alternating_reachable(graph, matcher.match_left, matcher.match_right)
    chosen = [sequences[i] for i in range(n) if i in left and i not in right]
    if len(chosen) != n - len(matcher.matching()):
        raise NumericError("antichain extraction disagrees with the chain cover size")
    return chosen


def _levels(sequences):
    by_sum = {}
    for a in sequences:
        by_sum.setdefault(sum(a), []).append(a)
    return by_sum


def rank_level_antichain(sequences):
    """Sequences of the most populous sum; equal sums are never comparable."""
    by_sum = _levels(sequences)
    best = max(sorted(by_sum), key=lambda s: len(by_sum[s]))
    return by_sum[best]


def chain_partition_size(sequences):
    """
    Size of a chain partition glued from maximum matchings between consecutive
    sums, an edge raising one coordinate by 1. No antichain is larger, so a
    level of this size is a maximum antichain.
    """
    by_sum = _levels(sequences)
    sums = sorted(by_sum)
    chains = len(by_sum[sums[0]])
    for low, high in zip(sums, sums[1:]):
        upper = {a: j for j, a in enumerate(by_sum[high])}
        edges = []
        for i, a in enumerate(by_sum[low]):
            for t in range(1, len(a)):
                raised = a[:t] + (a[t] + 1,) + a[t + 1:]
                if raised in upper:
                    edges.append((i, upper[raised]))
        matched = max_bipartite_matching(edges, len(by_sum[low]), len(upper))
        chains += len(upper) - len(matched)
    return chains


def antichain_hard_instance(L, S, max_dimension=10**6):
    """
    Vectors x(a) with blocks of sizes S^i valued S^-a_i and weights w(a) with
    blocks S^(a_i - i), for a in a large antichain of step sequences. Each
    x(a) has norm L+1 under its own w(a) and norm > S under every other.
    """
    if L < 1 or S < 2:
        raise ArgumentError(f"need L >= 1 and S >= 2, got L={L}, S={S}")
    sizes = [S ** i for i in range(L + 1)]
    d = sum(sizes)
    if d > max_dimension:
        raise SizeCapError(f"dimension {d} exceeds cap {max_dimension}", size=d, cap=max_dimension)

    sequences = step_sequences(L)
    if L <= FULL_COMPARABILITY_LEVELS:
        antichain, exact = maximum_antichain(sequences), True
    else:
        antichain = rank_level_antichain(sequences)
        exact = L <= EXACT_ANTICHAIN_LEVELS and chain_partition_size(sequences) == len(antichain)
        if not exact:
            logger.warning(f"L={L}: rank-level antichain of {len(antichain)} sequences is not certified maximum")
    antichain = sorted(antichain)

    vectors, weights, labels = [], [], []
    S = float(S)
    for a in antichain:
        vectors.append(np.repeat([S ** (-ai) for ai in a], sizes))
        weights.append(WeightVector(np.repeat([S ** (ai - i) for i, ai in enumerate(a)], sizes),
                                    label=f"w{a}"))
        labels.append(f"x{a}")
    logger.info(f"antichain instance L={L} S={int(S)}: d={d}, {len(antichain)} vectors, exact={exact}")
    return AntichainInstance(FiniteDomain(vectors, labels), weights, antichain, exact, int(S), L)


def tight_z_scale(d):
    """Smallest c keeping {sqrt(d) e_1, 1_d} an optimal top-k portfolio against c*(1/sqrt(i))."""
    k = np.arange(1, d + 1)
    partial = np.cumsum(1.0 / np.sqrt(k))
    return float(np.max(np.minimum(math.sqrt(d), k) / partial))


def example1_domain(d, z_scale="asymptotic"):
    """
    x = sqrt(d) e_1, y = 1_d, z = c (1, 1/sqrt(2), ..., 1/sqrt(d)). The
    asymptotic scale c = d^(1/3) separates top-k from ordered portfolios only for huge d;
    the tight scale shows the gap at a few thousand coordinates.
    """
    if d < 1:
        raise ArgumentError(f"d must be >= 1, got {d}")
    if z_scale == "asymptotic":
        c = d ** (1.0 / 3.0)
    elif z_scale == "tight":
        c = tight_z_scale(d)
    else:
        c = float(z_scale)
        if c <= 0.0:
            raise ArgumentError(f"z scale must be positive, got {z_scale}")
    x = np.zeros(d)
    x[0] = math.sqrt(d)
    y = np.ones(d)
    z = c / np.sqrt(np.arange(1, d + 1))
    return FiniteDomain([x, y, z], labels=["x", "y", "z"])
