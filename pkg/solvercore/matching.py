# solvercore/matching.py
"""
Maximum-cardinality bipartite matching (Hopcroft-Karp). Adjacency lists are
kept sorted so the matching found is a deterministic function of the edges.
"""
from collections import deque

from equinorm.exceptions import ArgumentError

UNMATCHED = -1


class BipartiteGraph:
    """Left vertices 0..num_left-1, right vertices 0..num_right-1."""

    def __init__(self, num_left, num_right, edges):
        if num_left < 0 or num_right < 0:
            raise ArgumentError("vertex counts must be nonnegative")
        self.num_left = num_left
        self.num_right = num_right
        adjacency = [set() for _ in range(num_left)]
        for u, v in edges:
            if not (0 <= u < num_left and 0 <= v < num_right):
                raise ArgumentError(f"edge ({u}, {v}) outside {num_left}x{num_right}")
            adjacency[u].add(v)
        self.adj = [sorted(neighbours) for neighbours in adjacency]

    @property
    def num_edges(self):
        return sum(len(a) for a in self.adj)


class HopcroftKarp:
    def __init__(self, graph):
        self.graph = graph
        self.match_left = [UNMATCHED] * graph.num_left
        self.match_right = [UNMATCHED] * graph.num_right
        self.dist = [0] * graph.num_left

    def _layer(self):
        """BFS from free left vertices; True if some augmenting path exists."""
        queue = deque()
        inf = self.graph.num_left + 1
        for u in range(self.graph.num_left):
            if self.match_left[u] == UNMATCHED:
                self.dist[u] = 0
                queue.append(u)
            else:
                self.dist[u] = inf
        found = False
        while queue:
            u = queue.popleft()
            for v in self.graph.adj[u]:
                w = self.match_right[v]
                if w == UNMATCHED:
                    found = True
                elif self.dist[w] == inf:
                    self.dist[w] = self.dist[u] + 1
                    queue.append(w)
        return found

    def _augment(self, root):
        # iterative DFS along the BFS layers
        stack = [(root, iter(self.graph.adj[root]))]
        path = []
        while stack:
            u, neighbours = stack[-1]
            advanced = False
            for v in neighbours:
                w = self.match_right[v]
                if w == UNMATCHED:
                    path.append((u, v))
                    for a, b in path:
                        self.match_left[a] = b
                        self.match_right[b] = a
                    return True
                if self.dist[w] == self.dist[u] + 1:
                    path.append((u, v))
                    stack.append((w, iter(self.graph.adj[w])))
                    advanced = True
                    break
            if not advanced:
                self.dist[u] = self.graph.num_left + 1
                stack.pop()
                if path:
                    path.pop()
        return False

    def run(self):
        while self._layer():
            for u in range(self.graph.num_left):
                if self.match_left[u] == UNMATCHED:
                    self._augment(u)
        return self.matching()

    def matching(self):
        return [(u, v) for u, v in enumerate(self.match_left) if v != UNMATCHED]


def max_bipartite_matching(edges, num_left, num_right):
    """Return the matched (left, right) pairs sorted by left vertex."""
    graph = BipartiteGraph(num_left, num_right, edges)
    return HopcroftKarp(graph).run()


def alternating_reachable(graph, match_left, match_right):
    """
    Left and right vertices reachable from free left vertices by alternating
    paths (non-matching edges left to right, matching edges right to left).
    Used for Konig's vertex cover.
    """
    seen_left = set(u for u in range(graph.num_left) if match_left[u] == UNMATCHED)
    seen_right = set()
    queue = deque(sorted(seen_left))
    while queue:
        u = queue.popleft()
        for v in graph.adj[u]:
            if v in seen_right or match_left[u] == v:
                continue
            seen_right.add(v)
            w = match_right[v]
            if w != UNMATCHED and w not in seen_left:
                seen_left.add(w)
                queue.append(w)
    return seen_left, seen_right
