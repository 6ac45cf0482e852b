# satisfaction/gadgets.py
"""Small instances on which no single order is good for both sum and max."""
import math

import networkx as nx

from equinorm.exceptions import ArgumentError
from satisfaction.problems import CompletionTimes, VertexCover

CT_MU = (math.sqrt(61.0) - 7.0) / 3.0
CT_DELTA = CT_MU / 2.0
CT_BEST_RATIO = (math.sqrt(61.0) - 1.0) / 6.0


def vc_lower_bound_instance(n):
    """
    Cycle v1..v2n plus a hub v0 joined to the odd cycle vertices. The odd
    vertices are the only cover of size n, while covering the hub first
    wins on total cover time.
    """
    if isinstance(n, bool) or int(n) != n or n < 2:
        raise ArgumentError(f"n must be an integer >= 2, got {n}")
    n = int(n)
    graph = nx.cycle_graph(range(1, 2 * n + 1))
    graph.add_node(0)
    graph.add_edges_from((0, v) for v in range(1, 2 * n, 2))
    return VertexCover(graph)


def odd_cover(n):
    return list(range(1, 2 * n, 2))


def hub_first_cover(n):
    return [0] + odd_cover(n)


def ct_lower_bound_instance(mu=CT_MU, delta=CT_DELTA):
    """Two machines A, B and three jobs: p = [[1, 1+delta], [1, 1+delta], [1+mu, 2]]."""
    if not (0.0 <= mu < 1.0 and 0.0 <= delta < 1.0):
        raise ArgumentError(f"mu and delta must lie in [0, 1), got {mu}, {delta}")
    return CompletionTimes([[1.0, 1.0 + delta], [1.0, 1.0 + delta], [1.0 + mu, 2.0]])
