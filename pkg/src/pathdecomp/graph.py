"""Immutable simple undirected graphs, generators, and edge-list file I/O.

Vertices are dense 0-based integers. Subgraphs carry an id map back to their
parent so every verifier statement can be checked on the original graph.
"""

from __future__ import annotations

import random
from bisect import bisect_left
from dataclasses import dataclass
from pathlib import Path as FilePath
from typing import Iterable, Iterator

from .errors import GenerationError, ParseError, PathdecompError

Edge = tuple[int, int]


def ekey(u: int, v: int) -> Edge:
    """Canonical (min, max) key for an undirected edge."""
    return (u, v) if u < v else (v, u)


class Graph:
    """Simple undirected graph; immutable after construction.

    Neighbor lists are kept sorted, so all iteration is deterministic.
    """

    __slots__ = ("n", "m", "_nbrs")

    def __init__(self, n: int, edges: Iterable[Edge]):
        if n < 0:
            raise PathdecompError(f"negative vertex count {n}")
        adj: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise PathdecompError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise PathdecompError(f"edge ({u},{v}) out of range for n={n}")
            adj[u].add(v)
            adj[v].add(u)
        self.n = n
        self._nbrs: tuple[tuple[int, ...], ...] = tuple(
            tuple(sorted(s)) for s in adj
        )
        self.m = sum(len(t) for t in self._nbrs) // 2

    def degree(self, v: int) -> int:
        return len(self._nbrs[v])

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._nbrs[v]

    def has_edge(self, u: int, v: int) -> bool:
        row = self._nbrs[u]
        i = bisect_left(row, v)
        return i < len(row) and row[i] == v

    def edges(self) -> Iterator[Edge]:
        for u in range(self.n):
            for v in self._nbrs[u]:
                if v > u:
                    yield (u, v)

    def edge_set(self) -> set[Edge]:
        return set(self.edges())

    def degrees(self) -> list[int]:
        return [len(t) for t in self._nbrs]

    def max_degree(self) -> int:
        return max((len(t) for t in self._nbrs), default=0)

    def min_degree(self) -> int:
        return min((len(t) for t in self._nbrs), default=0)

    def is_regular(self, d: int) -> bool:
        return all(len(t) == d for t in self._nbrs)

    def degree_into(self, v: int, block: set[int] | frozenset[int]) -> int:
        return sum(1 for w in self._nbrs[v] if w in block)

    def without_edges(self, drop: set[Edge]) -> "Graph":
        """Copy of the graph with the given canonical-key edges removed."""
        return Graph(self.n, (e for e in self.edges() if e not in drop))

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Graph)
            and self.n == other.n
            and self._nbrs == other._nbrs
        )

    def __hash__(self) -> int:
        return hash((self.n, self._nbrs))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class Subgraph:
    """A graph plus the map from its local ids back to the parent's ids."""

    graph: Graph
    to_parent: tuple[int, ...]

    def lift_vertex(self, v: int) -> int:
        return self.to_parent[v]

    def lift_vertices(self, vs: Iterable[int]) -> list[int]:
        tp = self.to_parent
        return [tp[v] for v in vs]

    def lift_path(self, path: tuple[int, ...]) -> tuple[int, ...]:
        tp = self.to_parent
        return tuple(tp[v] for v in path)

    def lift_edge(self, e: Edge) -> Edge:
        return ekey(self.to_parent[e[0]], self.to_parent[e[1]])

    def compose(self, inner: "Subgraph") -> "Subgraph":
        """`inner` is a subgraph of self.graph; re-root it at self's parent."""
        return Subgraph(inner.graph, tuple(self.to_parent[v] for v in inner.to_parent))


def identity_subgraph(g: Graph) -> Subgraph:
    return Subgraph(g, tuple(range(g.n)))


def induced_subgraph(g: Graph, vertices: Iterable[int]) -> Subgraph:
    """Induced subgraph on `vertices`, relabelled 0..k-1 in sorted id order."""
    keep = sorted(set(vertices))
    index = {v: i for i, v in enumerate(keep)}
    edges = []
    for u in keep:
        iu = index[u]
        for w in g.neighbors(u):
            if w > u and w in index:
                edges.append((iu, index[w]))
    return Subgraph(Graph(len(keep), edges), tuple(keep))


def spanning_subgraph(g: Graph, edges: Iterable[Edge]) -> Graph:
    """Subgraph on the same vertex set containing exactly `edges`."""
    return Graph(g.n, edges)


# ---------------------------------------------------------------------------
# file I/O


def load_graph(path: str | FilePath) -> Graph:
    """Read a whitespace-separated edge list.

    Lines starting with '#' are comments; a "# n=<count>" header overrides the
    inferred vertex count. Duplicate edges are dropped silently; self-loops are
    an error.
    """
    p = FilePath(path)
    edges: list[Edge] = []
    n_header: int | None = None
    max_id = -1
    with p.open("r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip().replace(" ", "")
                if body.startswith("n="):
                    try:
                        n_header = int(body[2:])
                    except ValueError:
                        raise ParseError(f"bad header {line!r}", lineno)
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ParseError(f"expected 'u v', got {line!r}", lineno)
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError:
                raise ParseError(f"non-integer vertex in {line!r}", lineno)
            if u == v:
                raise ParseError(f"self-loop '{u} {u}'", lineno)
            if u < 0 or v < 0:
                raise ParseError(f"negative vertex id in {line!r}", lineno)
            edges.append(ekey(u, v))
            max_id = max(max_id, u, v)
    n = n_header if n_header is not None else max_id + 1
    if max_id >= n:
        raise ParseError(f"vertex id {max_id} exceeds declared n={n}")
    return Graph(n, edges)


def save_graph(g: Graph, path: str | FilePath) -> None:
    p = FilePath(path)
    with p.open("w", encoding="utf-8") as fh:
        fh.write(f"# n={g.n}\n")
        for u, v in g.edges():
            fh.write(f"{u} {v}\n")


# ---------------------------------------------------------------------------
# generators


def gen_clique_union(copies: int, clique_size: int) -> Graph:
    """Disjoint union of `copies` complete graphs K_{clique_size}."""
    if copies < 1:
        raise PathdecompError(f"copies must be >= 1, got {copies}")
    if clique_size < 2:
        raise PathdecompError(f"clique_size must be >= 2, got {clique_size}")
    edges = []
    for c in range(copies):
        base = c * clique_size
        for i in range(clique_size):
            for j in range(i + 1, clique_size):
                edges.append((base + i, base + j))
    return Graph(copies * clique_size, edges)


def gen_complete(n: int) -> Graph:
    return gen_clique_union(1, n)


def gen_cycle(n: int) -> Graph:
    if n < 3:
        raise PathdecompError(f"cycle needs n >= 3, got {n}")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def gen_complete_bipartite(a: int, b: int) -> Graph:
    return Graph(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def gen_clique_bridge(clique_size: int, bridges: int = 1) -> Graph:
    """Two cliques joined by `bridges` disjoint edges (connectivity gadget)."""
    k = clique_size
    if bridges > k:
        raise PathdecompError("more bridges than clique vertices")
    g1 = gen_clique_union(2, k)
    edges = list(g1.edges())
    for i in range(bridges):
        edges.append((i, k + i))
    return Graph(2 * k, edges)


def gen_random_regular(n: int, d: int, seed: int, retries: int = 200) -> Graph:
    """Random d-regular simple graph via the pairing model.

    Rejection of loops/multi-edges with a retry budget, then edge-swap repair.
    The result always passes a full degree audit or the call raises.
    """
    if d < 0 or n <= d:
        raise GenerationError(f"need 0 <= d < n, got n={n}, d={d}")
    if (n * d) % 2 != 0:
        raise GenerationError(f"infeasible: n*d odd (n={n}, d={d})")
    if d == 0:
        return Graph(n, [])
    if d == n - 1:
        return gen_complete(n)

    rng = random.Random(f"regular:{seed}:{n}:{d}")

    def try_pairing() -> list[Edge] | None:
        stubs = [v for v in range(n) for _ in range(d)]
        rng.shuffle(stubs)
        seen: set[Edge] = set()
        pairs: list[Edge] = []
        for i in range(0, len(stubs), 2):
            u, v = stubs[i], stubs[i + 1]
            if u == v:
                return None
            e = ekey(u, v)
            if e in seen:
                return None
            seen.add(e)
            pairs.append(e)
        return pairs

    for _ in range(retries):
        pairs = try_pairing()
        if pairs is not None:
            g = Graph(n, pairs)
            if not g.is_regular(d):
                raise GenerationError("pairing produced a non-regular graph")
            return g

    # Repair mode: keep the multiset pairing, swap away loops and duplicates.
    stubs = [v for v in range(n) for _ in range(d)]
    rng.shuffle(stubs)
    pairs = [(stubs[i], stubs[i + 1]) for i in range(0, len(stubs), 2)]
    edge_count: dict[Edge, int] = {}
    for u, v in pairs:
        if u != v:
            edge_count[ekey(u, v)] = edge_count.get(ekey(u, v), 0) + 1

    def is_bad(idx: int) -> bool:
        u, v = pairs[idx]
        return u == v or edge_count.get(ekey(u, v), 0) > 1

    budget = 200 * n * d
    while budget > 0:
        bad = [i for i in range(len(pairs)) if is_bad(i)]
        if not bad:
            break
        i = bad[rng.randrange(len(bad))]
        j = rng.randrange(len(pairs))
        if i == j:
            budget -= 1
            continue
        u, v = pairs[i]
        x, y = pairs[j]
        if rng.random() < 0.5:
            nu, nv, nx, ny = u, x, v, y
        else:
            nu, nv, nx, ny = u, y, v, x
        if nu == nv or nx == ny:
            budget -= 1
            continue
        e1, e2 = ekey(nu, nv), ekey(nx, ny)
        old1 = ekey(u, v) if u != v else None
        old2 = ekey(x, y) if x != y else None
        new_badness = (edge_count.get(e1, 0) + (1 if e1 == e2 else 0)) + edge_count.get(e2, 0)
        old_badness = (1 if u == v else edge_count.get(old1, 0) - 1) + (
            1 if x == y else edge_count.get(old2, 0) - 1
        )
        if new_badness > old_badness:
            budget -= 1
            continue
        for old in (old1, old2):
            if old is not None:
                edge_count[old] -= 1
                if edge_count[old] == 0:
                    del edge_count[old]
        pairs[i] = (nu, nv)
        pairs[j] = (nx, ny)
        for new in (e1, e2):
            edge_count[new] = edge_count.get(new, 0) + 1
        budget -= 1

    if any(is_bad(i) for i in range(len(pairs))):
        raise GenerationError(
            f"could not realize an {d}-regular simple graph on {n} vertices "
            f"after {retries} pairings plus swap repair"
        )
    g = Graph(n, [ekey(u, v) for u, v in pairs])
    if not g.is_regular(d):
        raise GenerationError("swap repair produced a non-regular graph")
    return g


def gen_regular_clique_bridge(clique_size: int, bridge_pairs: int = 1) -> Graph:
    """Two cliques with `bridge_pairs` matching edges swapped across, so the
    graph stays (clique_size - 1)-regular (connectivity test gadget)."""
    k = clique_size
    if not (1 <= bridge_pairs <= k // 2):
        raise PathdecompError("bridge_pairs must be in [1, clique_size/2]")
    base = gen_clique_union(2, k)
    edges = set(base.edges())
    for i in range(bridge_pairs):
        a, b = 2 * i, 2 * i + 1
        edges.discard(ekey(a, b))
        edges.discard(ekey(k + a, k + b))
        edges.add(ekey(a, k + a))
        edges.add(ekey(b, k + b))
    return Graph(2 * k, edges)
