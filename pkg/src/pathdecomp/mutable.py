"""Mutable adjacency-set scratch graphs for peeling, trimming and routing.

Internal helper; public APIs exchange immutable Graph objects.
"""

from __future__ import annotations

from typing import Iterable

from .graph import Edge, Graph, ekey


class MutGraph:
    __slots__ = ("n", "adj")

    def __init__(self, n: int):
        self.n = n
        self.adj: list[set[int]] = [set() for _ in range(n)]

    @classmethod
    def from_graph(cls, g: Graph) -> "MutGraph":
        mg = cls(g.n)
        for u in range(g.n):
            mg.adj[u] = set(g.neighbors(u))
        return mg

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Edge]) -> "MutGraph":
        mg = cls(n)
        for u, v in edges:
            mg.adj[u].add(v)
            mg.adj[v].add(u)
        return mg

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def remove_edge(self, u: int, v: int) -> None:
        self.adj[u].discard(v)
        self.adj[v].discard(u)

    def add_edge(self, u: int, v: int) -> None:
        if u != v:
            self.adj[u].add(v)
            self.adj[v].add(u)

    def remove_vertex(self, v: int) -> list[int]:
        """Isolate v; returns its former neighbors."""
        nbrs = sorted(self.adj[v])
        for w in nbrs:
            self.adj[w].discard(v)
        self.adj[v] = set()
        return nbrs

    def edges(self) -> list[Edge]:
        out = []
        for u in range(self.n):
            for v in self.adj[u]:
                if v > u:
                    out.append((u, v))
        return out

    def edge_count(self) -> int:
        return sum(len(s) for s in self.adj) // 2

    def vertices_with_degree(self) -> list[int]:
        return [v for v in range(self.n) if self.adj[v]]

    def to_graph(self) -> Graph:
        return Graph(self.n, self.edges())

    def copy(self) -> "MutGraph":
        mg = MutGraph(self.n)
        mg.adj = [set(s) for s in self.adj]
        return mg


def peel_to_min_degree(mg: MutGraph, t: int, within: set[int] | None = None) -> set[int]:
    """Cascade-remove vertices of degree < t; returns the surviving vertex set.

    Only vertices in `within` (default: all with an edge) are considered part
    of the graph; peeled vertices are removed from `mg` in place.
    """
    alive = set(within) if within is not None else set(mg.vertices_with_degree())
    queue = [v for v in sorted(alive) if len(mg.adj[v] & alive) < t]
    alive_deg = {v: len(mg.adj[v] & alive) for v in alive}
    from collections import deque

    dq = deque(queue)
    dead: set[int] = set()
    while dq:
        v = dq.popleft()
        if v in dead or v not in alive:
            continue
        if alive_deg[v] >= t:
            continue
        dead.add(v)
        alive.discard(v)
        for w in sorted(mg.adj[v]):
            if w in alive:
                alive_deg[w] -= 1
                if alive_deg[w] < t:
                    dq.append(w)
        mg.remove_vertex(v)
    return alive


def components(mg: MutGraph, within: set[int]) -> list[set[int]]:
    """Connected components of mg restricted to `within`, deterministic order."""
    seen: set[int] = set()
    comps: list[set[int]] = []
    for start in sorted(within):
        if start in seen:
            continue
        comp = {start}
        seen.add(start)
        stack = [start]
        while stack:
            v = stack.pop()
            for w in mg.adj[v]:
                if w in within and w not in seen:
                    seen.add(w)
                    comp.add(w)
                    stack.append(w)
        comps.append(comp)
    return comps
