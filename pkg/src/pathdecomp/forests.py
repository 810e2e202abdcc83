"""Path forests: vertex-disjoint simple paths inside one host graph.

A path is a tuple of distinct vertex ids; a single vertex is a length-0 path.
"""

from __future__ import annotations

from collections import Counter
from typing import Iterable, Iterator

from .errors import PathdecompError
from .graph import Edge, Graph, ekey

Path = tuple[int, ...]


def path_edges(p: Path) -> Iterator[Edge]:
    for i in range(len(p) - 1):
        yield ekey(p[i], p[i + 1])


def is_simple_path(g: Graph, p: Path) -> bool:
    if len(p) != len(set(p)):
        return False
    if any(not (0 <= v < g.n) for v in p):
        return False
    return all(g.has_edge(p[i], p[i + 1]) for i in range(len(p) - 1))


class PathForest:
    """A set of vertex-disjoint paths, with an endpoint multiplicity index."""

    __slots__ = ("paths", "_vertices")

    def __init__(self, paths: Iterable[Path] = ()):
        self.paths: list[Path] = []
        self._vertices: set[int] = set()
        for p in paths:
            self.add_path(tuple(p))

    def add_path(self, p: Path) -> None:
        p = tuple(p)
        if len(p) == 0:
            raise PathdecompError("empty vertex sequence is not a path")
        if len(set(p)) != len(p):
            raise PathdecompError(f"repeated vertex in path {p}")
        if any(v in self._vertices for v in p):
            raise PathdecompError("path shares a vertex with the forest")
        self.paths.append(p)
        self._vertices.update(p)

    def remove_path(self, index: int) -> Path:
        p = self.paths.pop(index)
        self._vertices.difference_update(p)
        return p

    def replace_paths(self, drop: set[int], new_paths: Iterable[Path]) -> None:
        """Drop paths by index and add replacements (used when joining)."""
        kept = [p for i, p in enumerate(self.paths) if i not in drop]
        self.paths = []
        self._vertices = set()
        for p in kept:
            self.add_path(p)
        for p in new_paths:
            self.add_path(tuple(p))

    def vertices(self) -> set[int]:
        return set(self._vertices)

    def __contains__(self, v: int) -> bool:
        return v in self._vertices

    def __len__(self) -> int:
        return len(self.paths)

    def num_edges(self) -> int:
        return sum(len(p) - 1 for p in self.paths)

    def edge_set(self) -> set[Edge]:
        out: set[Edge] = set()
        for p in self.paths:
            out.update(path_edges(p))
        return out

    def endpoints(self) -> list[int]:
        """Endpoints with multiplicity; length-0 paths count their vertex twice."""
        out = []
        for p in self.paths:
            out.append(p[0])
            out.append(p[-1])
        return out

    def endpoint_count(self) -> Counter[int]:
        return Counter(self.endpoints())

    def copy(self) -> "PathForest":
        f = PathForest()
        f.paths = list(self.paths)
        f._vertices = set(self._vertices)
        return f

    def __repr__(self) -> str:
        return f"PathForest(paths={len(self.paths)}, edges={self.num_edges()})"


def forest_sum(a: PathForest, b: PathForest) -> PathForest:
    """The '+' of two path forests; valid only if the union is again a forest.

    Every path of `b` must attach at endpoints of `a` (or be disjoint from it);
    the result is recomputed from the union's edges so joins are resolved.
    """
    edges: set[Edge] = a.edge_set() | b.edge_set()
    singletons = (a.vertices() | b.vertices()) - {v for e in edges for v in e}
    return forest_from_edges(edges, singletons)


def forest_from_edges(edges: set[Edge], singletons: Iterable[int] = ()) -> PathForest:
    """Reassemble a path forest from an edge set that must form disjoint paths."""
    adj: dict[int, list[int]] = {}
    for u, v in edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    for v, row in adj.items():
        if len(row) > 2:
            raise PathdecompError(f"vertex {v} has degree {len(row)} > 2")
    forest = PathForest()
    seen: set[int] = set()
    ends = sorted(v for v, row in adj.items() if len(row) == 1)
    for start in ends:
        if start in seen:
            continue
        path = [start]
        seen.add(start)
        prev, cur = None, start
        while True:
            nxt = None
            for w in adj[cur]:
                if w != prev and w not in seen:
                    nxt = w
                    break
            if nxt is None:
                break
            path.append(nxt)
            seen.add(nxt)
            prev, cur = cur, nxt
        forest.add_path(tuple(path))
    for v in sorted(adj):
        if v not in seen:
            raise PathdecompError(f"edge set contains a cycle through {v}")
    for v in sorted(set(singletons)):
        if v not in seen:
            forest.add_path((v,))
    return forest


def join_paths(p: Path, q: Path, connector: Path) -> Path:
    """Join two disjoint paths with a connector running endpoint to endpoint."""
    if connector[0] in (p[0], p[-1]) and connector[-1] in (q[0], q[-1]):
        pass
    elif connector[0] in (q[0], q[-1]) and connector[-1] in (p[0], p[-1]):
        p, q = q, p
    else:
        raise PathdecompError("connector does not run between path endpoints")
    a = p if p[-1] == connector[0] else p[::-1]
    b = q if q[0] == connector[-1] else q[::-1]
    joined = a + connector[1:-1] + b
    if len(set(joined)) != len(joined):
        raise PathdecompError("join would repeat a vertex")
    return joined


def chop_path(p: Path, piece_len: int, from_start: bool = True) -> tuple[list[Path], set[Edge]]:
    """Cut a path into floor(len/piece_len) pieces of exactly piece_len edges.

    Returns (pieces, leftover edges). Leftover is the unchopped tail.
    """
    if piece_len < 1:
        raise PathdecompError(f"piece length must be >= 1, got {piece_len}")
    seq = p if from_start else p[::-1]
    total = len(seq) - 1
    pieces: list[Path] = []
    pos = 0
    while total - pos >= piece_len:
        pieces.append(tuple(seq[pos : pos + piece_len + 1]))
        pos += piece_len
    leftover = set(path_edges(tuple(seq[pos:])))
    return pieces, leftover


def save_paths(paths: list[Path], path_file) -> None:
    """JSON (.json) or flat one-path-per-line text, chosen by extension."""
    import json
    from pathlib import Path as FilePath

    p = FilePath(path_file)
    if p.suffix == ".json":
        p.write_text(
            json.dumps({"paths": [list(q) for q in paths]}, indent=0) + "\n",
            encoding="utf-8",
        )
    else:
        with p.open("w", encoding="utf-8") as fh:
            for q in paths:
                fh.write(" ".join(str(v) for v in q) + "\n")


def load_paths(path_file) -> list[Path]:
    import json
    from pathlib import Path as FilePath

    p = FilePath(path_file)
    text = p.read_text(encoding="utf-8")
    if p.suffix == ".json":
        data = json.loads(text)
        return [tuple(q) for q in data["paths"]]
    out = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        out.append(tuple(int(tok) for tok in line.split()))
    return out
