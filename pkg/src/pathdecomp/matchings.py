"""Large edge-disjoint matchings in bipartite graphs, and the rotation
decomposition of K_s into Hamilton paths.

The matching extractor colors the bipartite graph with exactly Delta colors:
pad to a Delta-regular multigraph, then iterated Euler splitting, extracting a
perfect matching by alternating/augmenting paths whenever the degree is odd.
Every color class is then a matching of the real graph.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from math import sqrt

from .errors import CertificateError, PreconditionError
from .forests import Path
from .graph import Edge, Graph, ekey


@dataclass
class MatchingFamily:
    """Edge-disjoint matchings between two host vertex classes, largest first."""

    left: tuple[int, ...]
    right: tuple[int, ...]
    matchings: list[list[Edge]]
    bound_count: int
    bound_size: int

    def sizes(self) -> list[int]:
        return [len(m) for m in self.matchings]

    def meeting_bound(self) -> int:
        return sum(1 for m in self.matchings if len(m) >= self.bound_size)

    def to_json(self) -> dict:
        return {
            "left_size": len(self.left),
            "right_size": len(self.right),
            "sizes": self.sizes(),
            "bound_count": self.bound_count,
            "bound_size": self.bound_size,
        }


def hopcroft_karp(adj: list[list[int]], nl: int, nr: int) -> list[int]:
    """Maximum bipartite matching; returns match_l (right partner or -1)."""
    INF = 1 << 30
    match_l = [-1] * nl
    match_r = [-1] * nr
    dist = [0] * nl

    def bfs() -> bool:
        q = deque()
        for u in range(nl):
            if match_l[u] == -1:
                dist[u] = 0
                q.append(u)
            else:
                dist[u] = INF
        found = False
        while q:
            u = q.popleft()
            for v in adj[u]:
                w = match_r[v]
                if w == -1:
                    found = True
                elif dist[w] == INF:
                    dist[w] = dist[u] + 1
                    q.append(w)
        return found

    def dfs(u: int) -> bool:
        for v in adj[u]:
            w = match_r[v]
            if w == -1 or (dist[w] == dist[u] + 1 and dfs(w)):
                match_l[u] = v
                match_r[v] = u
                return True
        dist[u] = INF
        return False

    while bfs():
        for u in range(nl):
            if match_l[u] == -1:
                dfs(u)
    return match_l


class _Multigraph:
    """Bipartite multigraph over local ids, edges tracked by index."""

    def __init__(self, nl: int, nr: int):
        self.nl = nl
        self.nr = nr
        self.ends: list[tuple[int, int]] = []  # (left, right)
        self.real: list[Edge | None] = []  # host edge or None for padding

    def add_edge(self, u: int, v: int, real: Edge | None) -> int:
        self.ends.append((u, v))
        self.real.append(real)
        return len(self.ends) - 1


def _euler_split(mg: _Multigraph, edge_ids: list[int]) -> tuple[list[int], list[int]]:
    """Split an even-regular edge set into two halves of equal degree."""
    inc_l: dict[int, list[int]] = {}
    inc_r: dict[int, list[int]] = {}
    for eid in edge_ids:
        u, v = mg.ends[eid]
        inc_l.setdefault(u, []).append(eid)
        inc_r.setdefault(v, []).append(eid)
    used = set()
    ptr_l = {u: 0 for u in inc_l}
    ptr_r = {v: 0 for v in inc_r}
    half_a: list[int] = []
    half_b: list[int] = []

    def next_edge(side_left: bool, x: int) -> int | None:
        inc, ptr = (inc_l, ptr_l) if side_left else (inc_r, ptr_r)
        row = inc.get(x, ())
        i = ptr.get(x, 0)
        while i < len(row) and row[i] in used:
            i += 1
        ptr[x] = i
        return row[i] if i < len(row) else None

    for start_eid in edge_ids:
        if start_eid in used:
            continue
        # walk a closed trail starting with this edge (all degrees even)
        circuit: list[int] = []
        u0, _ = mg.ends[start_eid]
        side_left, x = True, u0
        while True:
            eid = next_edge(side_left, x)
            if eid is None:
                break
            used.add(eid)
            circuit.append(eid)
            u, v = mg.ends[eid]
            x = v if side_left else u
            side_left = not side_left
        # bipartite circuits have even length, so alternation is consistent
        for i, eid in enumerate(circuit):
            (half_a if i % 2 == 0 else half_b).append(eid)
    return half_a, half_b


def _perfect_matching_ids(mg: _Multigraph, edge_ids: list[int]) -> list[int]:
    """One edge id per vertex pair of a perfect matching of this edge set."""
    simple: dict[tuple[int, int], int] = {}
    adj: list[list[int]] = [[] for _ in range(mg.nl)]
    for eid in edge_ids:
        u, v = mg.ends[eid]
        if (u, v) not in simple:
            simple[(u, v)] = eid
            adj[u].append(v)
    match_l = hopcroft_karp(adj, mg.nl, mg.nr)
    if any(m == -1 for m in match_l):
        raise CertificateError("regular bipartite multigraph missing a perfect matching")
    return [simple[(u, match_l[u])] for u in range(mg.nl)]


def _color_regular(mg: _Multigraph, edge_ids: list[int], delta: int) -> list[list[int]]:
    if delta == 0:
        if edge_ids:
            raise CertificateError("edges left at color depth 0")
        return []
    if delta == 1:
        return [edge_ids]
    if delta % 2 == 1:
        pm = _perfect_matching_ids(mg, edge_ids)
        pm_set = set(pm)
        rest = [e for e in edge_ids if e not in pm_set]
        return [pm] + _color_regular(mg, rest, delta - 1)
    a, b = _euler_split(mg, edge_ids)
    return _color_regular(mg, a, delta // 2) + _color_regular(mg, b, delta // 2)


def bipartite_edge_coloring(
    g: Graph, left: list[int], right: list[int]
) -> list[list[Edge]]:
    """Proper edge coloring of g[left, right] into exactly Delta color classes."""
    lidx = {v: i for i, v in enumerate(left)}
    ridx = {v: i for i, v in enumerate(right)}
    edges = []
    for u in left:
        for w in g.neighbors(u):
            if w in ridx:
                edges.append((u, w))
    if not edges:
        return []
    deg: dict[int, int] = {}
    for u, w in edges:
        deg[u] = deg.get(u, 0) + 1
        deg[w] = deg.get(w, 0) + 1
    delta = max(deg.values())
    npad = max(len(left), len(right))
    mg = _Multigraph(npad, npad)
    for u, w in edges:
        mg.add_edge(lidx[u], ridx[w], ekey(u, w))
    # pad every vertex to degree delta with dummy parallel edges
    ldef = [delta] * npad
    rdef = [delta] * npad
    for eid in range(len(mg.ends)):
        u, v = mg.ends[eid]
        ldef[u] -= 1
        rdef[v] -= 1
    li = [u for u in range(npad) for _ in range(ldef[u])]
    ri = [v for v in range(npad) for _ in range(rdef[v])]
    if len(li) != len(ri):
        raise CertificateError("padding deficit mismatch")
    for u, v in zip(li, ri):
        mg.add_edge(u, v, None)
    classes = _color_regular(mg, list(range(len(mg.ends))), delta)
    if len(classes) != delta:
        raise CertificateError(f"expected {delta} colors, got {len(classes)}")
    out: list[list[Edge]] = []
    for cls in classes:
        real = sorted(mg.real[eid] for eid in cls if mg.real[eid] is not None)
        out.append(real)
    return out


def _peel_matchings(
    g: Graph, left: list[int], right: list[int], count: int
) -> list[list[Edge]]:
    """Successive near-maximum matchings by augmenting paths on the residual."""
    lidx = {v: i for i, v in enumerate(left)}
    ridx = {v: i for i, v in enumerate(right)}
    residual: list[set[int]] = [set() for _ in range(len(left))]
    for u in left:
        for w in g.neighbors(u):
            if w in ridx:
                residual[lidx[u]].add(ridx[w])
    out: list[list[Edge]] = []
    for _ in range(count):
        adj = [sorted(residual[u]) for u in range(len(left))]
        match_l = hopcroft_karp(adj, len(left), len(right))
        m = [
            ekey(left[u], right[match_l[u]])
            for u in range(len(left))
            if match_l[u] != -1
        ]
        if not m:
            break
        for u in range(len(left)):
            if match_l[u] != -1:
                residual[u].discard(match_l[u])
        out.append(sorted(m))
    return out


def bipartite_matchings(
    g: Graph,
    left: list[int],
    right: list[int],
    d: int,
    n: int,
    gamma: float,
    method: str = "coloring",
    count: int | None = None,
) -> MatchingFamily:
    """Edge-disjoint matchings in g[left, right], largest first.

    With class sizes (1 +- gamma)n and all degrees (1 +- gamma)d, gamma*d >= 1,
    at least (1 - 10*sqrt(gamma))*d of the returned matchings have size at
    least (1 - 10*sqrt(gamma))*n; this is audited whenever the bound is
    nontrivial. `method="peel"` swaps the extractor for successive maximum
    matchings (same surface, used where degree spread makes coloring classes
    too thin to chain).
    """
    if not left or not right:
        raise PreconditionError("empty vertex class")
    if set(left) & set(right):
        raise PreconditionError("vertex classes overlap")
    if gamma * d < 1:
        raise PreconditionError(f"need gamma*d >= 1, got {gamma * d:.3f}")
    for cls in (left, right):
        if not (1 - gamma) * n <= len(cls) <= (1 + gamma) * n:
            raise PreconditionError(
                f"class size {len(cls)} outside (1+-{gamma}){n}"
            )
    rset = set(right)
    lset = set(left)
    for u in left:
        du = sum(1 for w in g.neighbors(u) if w in rset)
        if not (1 - gamma) * d <= du <= (1 + gamma) * d:
            raise PreconditionError(f"degree {du} of {u} outside (1+-{gamma}){d}")
    for v in right:
        dv = sum(1 for w in g.neighbors(v) if w in lset)
        if not (1 - gamma) * d <= dv <= (1 + gamma) * d:
            raise PreconditionError(f"degree {dv} of {v} outside (1+-{gamma}){d}")

    slack = 10 * sqrt(gamma)
    bound_count = max(0, int((1 - slack) * d))
    bound_size = max(0, int((1 - slack) * n))

    if method == "coloring":
        classes = bipartite_edge_coloring(g, list(left), list(right))
    elif method == "peel":
        want = count if count is not None else int((1 + gamma) * d) + 1
        classes = _peel_matchings(g, list(left), list(right), want)
    else:
        raise PreconditionError(f"unknown matching method {method!r}")

    classes.sort(key=len, reverse=True)
    if count is not None:
        classes = classes[:count]
    fam = MatchingFamily(tuple(left), tuple(right), classes, bound_count, bound_size)
    if bound_count > 0 and bound_size > 0 and fam.meeting_bound() < bound_count:
        raise CertificateError(
            f"only {fam.meeting_bound()} matchings of size >= {bound_size}, "
            f"need {bound_count}"
        )
    return fam


# ---------------------------------------------------------------------------
# rotation decomposition of K_s


def ks_rotation_paths(s: int) -> list[Path]:
    """s/2 edge-disjoint Hamilton paths decomposing E(K_s), each vertex an
    endpoint exactly once: the zigzag 0,1,s-1,2,s-2,... rotated s/2 times."""
    if s < 2 or s % 2 != 0:
        raise PreconditionError(f"s must be even and >= 2, got {s}")
    base = [0]
    lo, hi = 1, s - 1
    while len(base) < s:
        base.append(lo)
        lo += 1
        if len(base) < s:
            base.append(hi)
            hi -= 1
    out = []
    for r in range(s // 2):
        out.append(tuple((v + r) % s for v in base))
    return out
