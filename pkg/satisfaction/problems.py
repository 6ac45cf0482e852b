# satisfaction/problems.py
import logging
import math

import networkx as nx
import numpy as np
from scipy.spatial.distance import cdist

from equinorm.exceptions import ArgumentError, InfeasibleError
from equinorm.utils import make_rng

logger = logging.getLogger(__name__)

METRIC_TOL = 1e-9


class Satisfier:
    """An ordered collection of distinct objects; position i has rank i+1."""

    def __init__(self, order=()):
        self.order = tuple(order)
        if len(set(self.order)) != len(self.order):
            raise ArgumentError("a satisfier order may not repeat an object")

    @property
    def objects(self):
        return frozenset(self.order)

    def __len__(self):
        return len(self.order)

    def __iter__(self):
        return iter(self.order)

    def __eq__(self, other):
        return isinstance(other, Satisfier) and self.order == other.order

    def __hash__(self):
        return hash(self.order)

    def __repr__(self):
        return f"Satisfier({list(self.order)})"

    def to_json(self):
        return [list(x) if isinstance(x, tuple) else x for x in self.order]


class SatisfactionProblem:
    """
    Clients, objects that satisfy subsets of them, and a time for each object
    of an ordered satisfier. Subclasses fill in `objects`, `clients`,
    `satisfies` and `times`.
    """

    kind = None
    gamma = 1.0

    def __init__(self, clients, objects):
        self.clients = list(clients)
        self.objects = list(objects)
        self.client_index = {c: i for i, c in enumerate(self.clients)}
        self._known = set(self.objects)

    def satisfies(self, obj):
        raise NotImplementedError

    def object_times(self, order):
        raise NotImplementedError

    def earliest_time(self, obj):
        """A time obj cannot beat in any satisfier."""
        raise NotImplementedError

    def min_positive_cost(self):
        raise NotImplementedError

    def cost_upper_bound(self):
        raise NotImplementedError

    def times(self, sat):
        self.check(sat)
        return self.object_times(sat.order)

    def check(self, sat):
        unknown = [x for x in sat.order if x not in self._known]
        if unknown:
            raise ArgumentError(f"objects {unknown[:5]} do not belong to {self}")
        return sat

    @property
    def num_clients(self):
        return len(self.clients)

    def __str__(self):
        return f"{type(self).__name__}({self.num_clients} clients, {len(self.objects)} objects)"


class CompletionTimes(SatisfactionProblem):
    """Jobs (rows of p) on machines (columns); object (j, i) runs job j on machine i."""

    kind = "completion_times"

    def __init__(self, p):
        try:
            p = np.atleast_2d(np.asarray(p, dtype=float))
        except (TypeError, ValueError):
            raise ArgumentError("processing times must be numeric")
        if p.ndim != 2 or p.size == 0:
            raise ArgumentError(f"processing times must be a nonempty jobs x machines matrix, got {p.shape}")
        if not np.all(np.isfinite(p)) or np.any(p <= 0.0):
            raise ArgumentError("processing times must be positive and finite")
        self.p = p
        n, d = p.shape
        super().__init__(range(n), [(j, i) for j in range(n) for i in range(d)])

    @property
    def num_machines(self):
        return self.p.shape[1]

    def satisfies(self, obj):
        return frozenset((obj[0],))

    def object_times(self, order):
        load = np.zeros(self.num_machines)
        times = {}
        for j, i in order:
            load[i] += self.p[j, i]
            times[(j, i)] = float(load[i])
        return times

    def earliest_time(self, obj):
        j, i = obj
        return float(self.p[j, i])

    def min_positive_cost(self):
        return float(self.p.min())

    def cost_upper_bound(self):
        return float(self.p.sum())

    def to_json(self):
        return {"type": self.kind, "p": self.p.tolist()}


class SetCover(SatisfactionProblem):
    """Object x covers the clients in sets[x]; its time is its position."""

    kind = "setcover"

    def __init__(self, n_elements, sets, labels=None):
        if isinstance(n_elements, bool) or int(n_elements) != n_elements or n_elements < 1:
            raise ArgumentError(f"ground set size must be a positive integer, got {n_elements}")
        n_elements = int(n_elements)
        if not sets:
            raise ArgumentError("a set cover instance needs at least one set")
        labels = list(range(len(sets))) if labels is None else list(labels)
        if len(labels) != len(sets):
            raise ArgumentError(f"{len(labels)} labels for {len(sets)} sets")
        self.sets = {}
        for label, members in zip(labels, sets):
            members = frozenset(int(e) for e in members)
            if any(not 0 <= e < n_elements for e in members):
                raise ArgumentError(f"set {label} has elements outside 0..{n_elements - 1}")
            self.sets[label] = members
        missed = set(range(n_elements)) - set().union(*self.sets.values())
        if missed:
            raise InfeasibleError(f"elements {sorted(missed)[:10]} belong to no set")
        self.n_elements = n_elements
        super().__init__(range(n_elements), labels)

    def satisfies(self, obj):
        return self.sets[obj]

    def object_times(self, order):
        return {x: float(k + 1) for k, x in enumerate(order)}

    def earliest_time(self, obj):
        return 1.0

    def min_positive_cost(self):
        return 1.0

    def cost_upper_bound(self):
        return float(len(self.objects))

    def to_json(self):
        return {
            "type": self.kind,
            "n_elements": self.n_elements,
            "sets": [sorted(self.sets[x]) for x in self.objects],
        }


class VertexCover(SetCover):
    """Set cover whose clients are the edges of a graph and whose sets are vertices."""

    kind = "vertexcover"

    def __init__(self, graph):
        if nx.number_of_selfloops(graph):
            raise ArgumentError("vertex cover graphs may not have self-loops")
        if graph.number_of_edges() == 0:
            raise ArgumentError("vertex cover needs at least one edge")
        self.graph = graph
        self.edges = [tuple(sorted(e)) for e in graph.edges()]
        index = {e: k for k, e in enumerate(self.edges)}
        nodes = sorted(graph.nodes())
        sets = [[index[tuple(sorted((v, u)))] for u in graph.neighbors(v)] for v in nodes]
        super().__init__(len(self.edges), sets, labels=nodes)

    def to_json(self):
        return {
            "type": self.kind,
            "n_vertices": self.graph.number_of_nodes(),
            "edges": [list(e) for e in self.edges],
        }


class Tsp(SatisfactionProblem):
    """
    Vertices of a metric visited along a path. Paths that do not start at v0
    give every object infinite time.
    """

    kind = "tsp"
    gamma = 2.0

    def __init__(self, dist, v0=0):
        try:
            dist = np.atleast_2d(np.asarray(dist, dtype=float))
        except (TypeError, ValueError):
            raise ArgumentError("distances must be numeric")
        n = dist.shape[0]
        if dist.ndim != 2 or dist.shape != (n, n) or n == 0:
            raise ArgumentError(f"distances must be a square matrix, got {dist.shape}")
        if not np.all(np.isfinite(dist)) or np.any(dist < 0.0):
            raise ArgumentError("distances must be finite and nonnegative")
        if not np.allclose(dist, dist.T, rtol=0.0, atol=METRIC_TOL) or np.any(np.diag(dist) != 0.0):
            raise ArgumentError("distances must be symmetric with a zero diagonal")
        if n > 1 and dist[~np.eye(n, dtype=bool)].min() <= 0.0:
            raise ArgumentError("distinct vertices must be at positive distance")
        # d(a, c) <= d(a, b) + d(b, c) for all triples
        slack = dist[:, None, :] - dist[:, :, None] - dist[None, :, :]
        if slack.max() > METRIC_TOL * (1.0 + dist.max()):
            raise ArgumentError("distances violate the triangle inequality")
        if isinstance(v0, bool) or int(v0) != v0 or not 0 <= v0 < n:
            raise ArgumentError(f"start vertex {v0} outside 0..{n - 1}")
        self.dist = dist
        self.v0 = int(v0)
        super().__init__(range(n), range(n))

    def satisfies(self, obj):
        return frozenset((obj,))

    def object_times(self, order):
        if not order:
            return {}
        if order[0] != self.v0:
            return {v: math.inf for v in order}
        times, elapsed, previous = {}, 0.0, order[0]
        for v in order:
            elapsed += self.dist[previous, v]
            times[v] = float(elapsed)
            previous = v
        return times

    def earliest_time(self, obj):
        return float(self.dist[self.v0, obj])

    def min_positive_cost(self):
        others = np.delete(self.dist[self.v0], self.v0)
        return float(others.min()) if others.size else 1.0

    def cost_upper_bound(self):
        return float((len(self.objects) - 1) * self.dist.max()) or 1.0

    def to_json(self):
        return {"type": self.kind, "dist": self.dist.tolist(), "v0": self.v0}


def make_completion_times(p):
    return CompletionTimes(p)


def make_set_cover(n_elements, sets):
    return SetCover(n_elements, sets)


def make_vertex_cover(graph=None, n_vertices=None, edges=None):
    if graph is None:
        if n_vertices is None or edges is None:
            raise ArgumentError("give a graph or n_vertices and edges")
        graph = nx.Graph()
        graph.add_nodes_from(range(int(n_vertices)))
        for u, v in edges:
            if not (0 <= u < n_vertices and 0 <= v < n_vertices):
                raise ArgumentError(f"edge ({u}, {v}) outside 0..{n_vertices - 1}")
            graph.add_edge(int(u), int(v))
    return VertexCover(graph)


def make_tsp(dist, v0=0):
    return Tsp(dist, v0)


def random_completion_times(n, d, seed=0, p_range=(1.0, 10.0)):
    rng = make_rng(seed)
    return CompletionTimes(np.round(rng.uniform(*p_range, size=(n, d)), 3))


def random_set_cover(n_elements, m, seed=0, density=0.3):
    rng = make_rng(seed)
    sets = [set(np.flatnonzero(rng.random(n_elements) < density).tolist()) for _ in range(m)]
    for e in range(n_elements):
        if not any(e in s for s in sets):
            sets[int(rng.integers(m))].add(e)
    return SetCover(n_elements, sets)


def random_vertex_cover(n, m, seed=0):
    graph = nx.gnm_random_graph(n, m, seed=seed)
    if graph.number_of_edges() == 0:
        graph.add_edge(0, 1)
    return VertexCover(graph)


def random_tsp(n, seed=0, v0=0):
    rng = make_rng(seed)
    points = rng.uniform(0.0, 10.0, size=(n, 2))
    dist = cdist(points, points)
    return Tsp(dist, v0)
