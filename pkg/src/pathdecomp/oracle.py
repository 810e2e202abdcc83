"""Brute-force ground truth on tiny graphs.

Exact minimum vertex path cover (subset DP), exact P_l edge decomposition
(backtracking), and the cubic perfect-matching criterion. These back the
derived expected values in the test suite and never share code with the
constructive pipeline they audit.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from itertools import combinations

from .errors import BudgetError, PreconditionError
from .graph import Edge, Graph, ekey, gen_random_regular


@dataclass(frozen=True)
class OracleBudget:
    max_vertices: int = 12
    max_edges: int = 30
    time_limit: float = 60.0

    def __post_init__(self):
        if self.max_vertices <= 0 or self.max_edges <= 0 or self.time_limit <= 0:
            raise PreconditionError(f"budget fields must be positive: {self}")

    def admit(self, g: Graph) -> None:
        if g.n > self.max_vertices:
            raise BudgetError(f"{g.n} vertices exceeds budget {self.max_vertices}")
        if g.m > self.max_edges:
            raise BudgetError(f"{g.m} edges exceeds budget {self.max_edges}")


class _Deadline:
    def __init__(self, seconds: float):
        self.t_end = time.monotonic() + seconds

    def check(self) -> None:
        if time.monotonic() > self.t_end:
            raise BudgetError("oracle time limit exceeded")


def exact_min_path_cover(g: Graph, budget: OracleBudget = OracleBudget()) -> int:
    """Minimum number of vertex-disjoint paths covering all of V(g).

    Subset DP: state (covered set, endpoint of the open path). Isolated
    vertices count as length-0 paths.
    """
    budget.admit(g)
    n = g.n
    if n == 0:
        return 0
    deadline = _Deadline(budget.time_limit)
    full = (1 << n) - 1
    INF = n + 1
    # dp[mask][v] = min paths covering mask, v endpoint of the growing path
    dp = [[INF] * n for _ in range(1 << n)]
    for v in range(n):
        dp[1 << v][v] = 1
    for mask in range(1, 1 << n):
        if mask % 4096 == 0:
            deadline.check()
        row = dp[mask]
        for v in range(n):
            cur = row[v]
            if cur >= INF:
                continue
            for u in g.neighbors(v):
                if not mask & (1 << u):
                    m2 = mask | (1 << u)
                    if cur < dp[m2][u]:
                        dp[m2][u] = cur
            for u in range(n):
                if not mask & (1 << u):
                    m2 = mask | (1 << u)
                    if cur + 1 < dp[m2][u]:
                        dp[m2][u] = cur + 1
    return min(dp[full])


def exact_path_decomposition(
    g: Graph, length: int, budget: OracleBudget = OracleBudget()
) -> bool:
    """Does E(g) decompose into simple paths with exactly `length` edges?"""
    budget.admit(g)
    if length < 1:
        raise PreconditionError(f"path length must be >= 1, got {length}")
    if g.m == 0:
        return True
    if g.m % length != 0:
        return False
    deadline = _Deadline(budget.time_limit)

    uncovered: set[Edge] = g.edge_set()
    edge_order = sorted(uncovered)

    def free_edges(v: int):
        for w in g.neighbors(v):
            if ekey(v, w) in uncovered:
                yield w

    def extensions(path: list[int], budget_edges: int) -> list[list[int]]:
        """All ways to extend `path` forward by exactly budget_edges edges."""
        if budget_edges == 0:
            return [list(path)]
        out = []
        v = path[-1]
        on_path = set(path)
        for w in free_edges(v):
            if w in on_path:
                continue
            uncovered.discard(ekey(v, w))
            path.append(w)
            out.extend(extensions(path, budget_edges - 1))
            path.pop()
            uncovered.add(ekey(v, w))
        return out

    def paths_through(e: Edge) -> list[list[int]]:
        """All simple paths of `length` edges whose edge set contains e."""
        u, v = e
        uncovered.discard(e)
        results = []
        seen: set[tuple[int, ...]] = set()
        for left_len in range(length):
            right_len = length - 1 - left_len
            for left in extensions([u], left_len):
                stem = left[::-1] + [v]
                if len(set(stem)) != len(stem):
                    continue
                # mark stem edges used while extending right
                stem_edges = [ekey(stem[i], stem[i + 1]) for i in range(len(stem) - 1)]
                for se in stem_edges:
                    uncovered.discard(se)
                for full in extensions(list(stem), right_len):
                    if len(set(full)) == len(full):
                        key = tuple(full) if full[0] < full[-1] else tuple(full[::-1])
                        if key not in seen:
                            seen.add(key)
                            results.append(list(full))
                for se in stem_edges:
                    uncovered.add(se)
        uncovered.add(e)
        return results

    def solve() -> bool:
        deadline.check()
        target = None
        for e in edge_order:
            if e in uncovered:
                target = e
                break
        if target is None:
            return True
        for cand in paths_through(target):
            ces = [ekey(cand[i], cand[i + 1]) for i in range(len(cand) - 1)]
            for ce in ces:
                uncovered.discard(ce)
            if solve():
                return True
            for ce in ces:
                uncovered.add(ce)
        return False

    return solve()


def has_perfect_matching(g: Graph, budget: OracleBudget = OracleBudget()) -> bool:
    """Exhaustive search; intended for oracle-scale graphs only."""
    budget.admit(g)
    if g.n % 2 != 0:
        return False
    deadline = _Deadline(budget.time_limit)
    unmatched = set(range(g.n))

    def rec() -> bool:
        deadline.check()
        if not unmatched:
            return True
        v = min(unmatched)
        unmatched.discard(v)
        for w in g.neighbors(v):
            if w in unmatched:
                unmatched.discard(w)
                if rec():
                    return True
                unmatched.add(w)
        unmatched.add(v)
        return False

    return rec()


def kotzig_check(
    g: Graph, budget: OracleBudget = OracleBudget()
) -> tuple[bool, bool]:
    """(has P_3 edge decomposition, has perfect matching), both independent.

    Kotzig's theorem says the two agree on cubic graphs; the test suite
    asserts exactly that.
    """
    if not g.is_regular(3):
        raise PreconditionError("kotzig_check requires a 3-regular graph")
    budget.admit(g)
    has_p3 = exact_path_decomposition(g, 3, budget)
    has_pm = has_perfect_matching(g, budget)
    return has_p3, has_pm


# ---------------------------------------------------------------------------
# corpus generation for the Kotzig equivalence tests


def enumerate_cubic_graphs(n: int, limit: int | None = None) -> list[Graph]:
    """All labeled connected cubic graphs on n vertices, lexicographically.

    Backtracking over the adjacency of the lowest unfinished vertex. `limit`
    caps the output (the n=8 labeled count runs to five digits).
    """
    if n % 2 != 0 or n < 4:
        return []
    out: list[Graph] = []
    adj: list[set[int]] = [set() for _ in range(n)]

    def connected() -> bool:
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == n

    def rec(edges: list[Edge]) -> bool:
        if limit is not None and len(out) >= limit:
            return True
        v = next((i for i in range(n) if len(adj[i]) < 3), None)
        if v is None:
            if connected():
                out.append(Graph(n, edges))
            return limit is not None and len(out) >= limit
        # all of v's remaining partners at once: each graph appears exactly
        # once because lower vertices are already full
        need = 3 - len(adj[v])
        candidates = [w for w in range(v + 1, n) if w not in adj[v] and len(adj[w]) < 3]
        for chosen in combinations(candidates, need):
            for w in chosen:
                adj[v].add(w)
                adj[w].add(v)
                edges.append((v, w))
            if rec(edges):
                return True
            for w in chosen:
                edges.pop()
                adj[v].discard(w)
                adj[w].discard(v)
        return False

    rec([])
    return out


def petersen_graph() -> Graph:
    edges = [(i, (i + 1) % 5) for i in range(5)]
    edges += [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    edges += [(i, 5 + i) for i in range(5)]
    return Graph(10, edges)


def prism_graph(k: int) -> Graph:
    """Circular ladder on 2k vertices (cubic for k >= 3)."""
    edges = [(i, (i + 1) % k) for i in range(k)]
    edges += [(k + i, k + (i + 1) % k) for i in range(k)]
    edges += [(i, k + i) for i in range(k)]
    return Graph(2 * k, edges)


def moebius_ladder(n: int) -> Graph:
    """Cycle C_n plus antipodal chords; cubic for even n."""
    edges = [(i, (i + 1) % n) for i in range(n)]
    edges += [(i, i + n // 2) for i in range(n // 2)]
    return Graph(n, edges)


def cubic_corpus(seed: int = 0, samples_per_size: int = 20) -> list[Graph]:
    """The Kotzig test corpus: exhaustive small sizes, classics, and seeded
    random cubic graphs on 10 and 12 vertices."""
    corpus: list[Graph] = []
    corpus.extend(enumerate_cubic_graphs(4))
    corpus.extend(enumerate_cubic_graphs(6))
    corpus.extend(enumerate_cubic_graphs(8, limit=400))
    corpus.append(petersen_graph())
    corpus.append(prism_graph(3))
    corpus.append(prism_graph(4))
    corpus.append(prism_graph(5))
    corpus.append(prism_graph(6))
    corpus.append(moebius_ladder(10))
    corpus.append(moebius_ladder(12))
    rng = random.Random(f"cubic-corpus:{seed}")
    seen_keys = set()
    for n in (10, 12):
        for _ in range(samples_per_size):
            g = gen_random_regular(n, 3, seed=rng.randrange(1 << 30))
            key = (n, tuple(sorted(g.edges())))
            if key not in seen_keys and _is_connected(g):
                seen_keys.add(key)
                corpus.append(g)
    return corpus


def _is_connected(g: Graph) -> bool:
    if g.n == 0:
        return True
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for w in g.neighbors(v):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == g.n
