"""Dense spots: finding a maximal vertex-disjoint family, drawing a verified
sample set, and connecting path-forest endpoints into the family through it.
"""

from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass, field

from .engine import BadEvent, FunctionSampler, ResamplePolicy, run_until_good
from .errors import BudgetError, PreconditionError
from .forests import Path, PathForest, join_paths
from .graph import Graph, ekey, induced_subgraph
from .mutable import MutGraph, components, peel_to_min_degree
from .verify import BoundednessSpec, DenseSpotSpec, check_bounded, check_dense_spot


@dataclass
class DenseFamily:
    spots: list[tuple[int, ...]]
    spec: DenseSpotSpec
    scan_log: list[str] = field(default_factory=list)

    def vertex_set(self) -> set[int]:
        return {v for s in self.spots for v in s}

    def spot_of(self) -> dict[int, int]:
        return {v: i for i, s in enumerate(self.spots) for v in s}

    def to_json(self) -> dict:
        return {
            "spec": {"eta": self.spec.eta, "d": self.spec.d, "K": self.spec.K},
            "spots": [list(s) for s in self.spots],
            "scan_log": list(self.scan_log),
        }


def find_maximal_dense_family(g: Graph, spec: DenseSpotSpec) -> DenseFamily:
    """Peel-and-shrink scan for vertex-disjoint (eta,d,K)-dense subgraphs.

    Repeatedly: peel the residual to min degree (1-eta)d, take each component,
    and shrink any component above K*d vertices by deleting its lowest-degree
    vertex (cascading the peel) until it fits or dies. Stops when a full pass
    accepts nothing; maximality is relative to this deterministic search.
    """
    t = math.ceil((1 - spec.eta) * spec.d)
    residual = set(range(g.n))
    spots: list[tuple[int, ...]] = []
    log: list[str] = []
    cap = spec.K * spec.d
    passes = 0
    while True:
        passes += 1
        work = MutGraph(g.n)
        for u in residual:
            for w in g.neighbors(u):
                if w in residual and w > u:
                    work.add_edge(u, w)
        alive = peel_to_min_degree(work, t, set(residual))
        if not alive:
            log.append(f"pass {passes}: peel died, scan complete")
            break
        accepted = 0
        worklist = sorted(components(work, alive), key=lambda c: min(c))
        while worklist:
            comp = worklist.pop(0)
            if len(comp) <= cap:
                if check_dense_spot(g, comp, spec):
                    spots.append(tuple(sorted(comp)))
                    residual -= comp
                    for v in comp:
                        work.remove_vertex(v)
                    accepted += 1
                continue
            # shrink: drop the lowest-degree vertex, cascade, resplit
            v = min(comp, key=lambda x: (len(work.adj[x] & comp), x))
            comp.discard(v)
            work.remove_vertex(v)
            sub = MutGraph(g.n)
            for u in comp:
                for w in work.adj[u]:
                    if w in comp and w > u:
                        sub.add_edge(u, w)
            alive2 = peel_to_min_degree(sub, t, set(comp))
            if alive2:
                worklist = sorted(components(sub, alive2), key=lambda c: min(c)) + worklist
        log.append(f"pass {passes}: accepted {accepted} spots")
        if accepted == 0:
            break
    fam = DenseFamily(spots, spec, log)
    seen: set[int] = set()
    for s in fam.spots:
        if seen & set(s):
            raise PreconditionError("dense family spots are not disjoint")
        seen.update(s)
        if not check_dense_spot(g, s, spec):
            raise PreconditionError("dense family spot failed its own audit")
    return fam


# ---------------------------------------------------------------------------
# good samples


@dataclass
class SampleSet:
    X: frozenset[int]
    p: float
    gamma: float
    k: int
    eta: float
    K: float
    certificates: dict = field(default_factory=dict)

    def per_spot(self, family: DenseFamily) -> list[set[int]]:
        return [set(s) & self.X for s in family.spots]

    def to_json(self) -> dict:
        return {
            "size": len(self.X),
            "p": self.p,
            "gamma": self.gamma,
            "k": self.k,
            "eta": self.eta,
            "K": self.K,
            "certificates": self.certificates,
            "vertices": sorted(self.X),
        }


def _neighbor_union(g: Graph, centers: tuple[int, ...]) -> set[int]:
    out: set[int] = set()
    for c in centers:
        out.update(g.neighbors(c))
    return out


def good_sample(
    g: Graph,
    family: DenseFamily,
    p: float,
    gamma: float,
    k: int,
    eta: float,
    seed: int,
    d: int | None = None,
    max_rounds: int = 200,
    event_sample: int = 48,
) -> SampleSet:
    """Draw X by independent p-inclusion and resample until the size, degree,
    per-spot, and sampled neighbourhood-union events all clear.

    The full asymptotic event family is astronomically large; the certificate
    records which U-centers were checked (spec sanctions the truncation).
    """
    d_ref = d if d is not None else family.spec.d
    for s in family.spots:
        if not (d_ref / 2 <= len(s) <= 2 * family.spec.K * d_ref):
            raise PreconditionError(
                f"spot size {len(s)} outside [d/2, 2Kd] = "
                f"[{d_ref / 2:.0f}, {2 * family.spec.K * d_ref:.0f}]"
            )
    n = g.n
    pd = p * d_ref
    spots = [set(s) for s in family.spots]

    # near-even blocks with sizes in [d/2, d]
    num_blocks = max(1, math.ceil(n / max(2, d_ref)))
    blocks = [list(range(n))[i::num_blocks] for i in range(num_blocks)]

    rng_u = random.Random(f"good-sample-events:{seed}")
    u_sample = sorted(rng_u.sample(range(n), min(event_sample, n))) if n else []
    y_units = {u: _neighbor_union(g, (u,)) for u in u_sample}

    def size_bad(x: set[int]) -> bool:
        return not (1 - gamma) * p * n <= len(x) <= (1 + gamma) * p * n

    def degree_bad(x: set[int]) -> bool:
        lo, hi = (1 - gamma) * pd, (1 + gamma) * pd
        for v in range(n):
            cnt = sum(1 for w in g.neighbors(v) if w in x)
            if not lo <= cnt <= hi:
                return True
        return False

    def blocks_bad(x: set[int]) -> bool:
        for blk in blocks:
            cnt = sum(1 for v in blk if v in x)
            if not (1 - gamma) * p * len(blk) <= cnt <= (1 + gamma) * p * len(blk):
                return True
        return False

    def spots_bad(x: set[int]) -> bool:
        for s in spots:
            cnt = len(s & x)
            if not (1 - gamma) * p * len(s) <= cnt <= (1 + gamma) * p * len(s):
                return True
            for v in range(n):
                dv = sum(1 for w in g.neighbors(v) if w in s)
                if dv == 0:
                    continue
                cv = sum(1 for w in g.neighbors(v) if w in s and w in x)
                if abs(cv - p * dv) > gamma * pd:
                    return True
        return False

    def units_bad(x: set[int]) -> bool:
        for u in u_sample:
            yu = y_units[u]
            # B3: |Y_U cap X| = p|Y_U| +- eta*pd
            cnt = sum(1 for v in yu if v in x)
            if abs(cnt - p * len(yu)) > eta * pd:
                return True
            # B1 restricted to vertices seeing Y_U
            boundary = set(yu)
            for v in yu:
                boundary.update(g.neighbors(v))
            for v in boundary:
                dyu = sum(1 for w in g.neighbors(v) if w in yu)
                cx = sum(1 for w in g.neighbors(v) if w in yu and w in x)
                if cx > p * dyu + eta * pd:
                    return True
            # B2: dense core of Y_U is not oversampled
            zu = {
                v
                for v in yu
                if sum(1 for w in g.neighbors(v) if w in yu) >= (1 - 3 * eta) * d_ref
            }
            if sum(1 for v in zu if v in x) > p * len(zu) + eta * pd:
                return True
            # B4 per intersecting spot
            for s in spots:
                inter = yu & s
                if inter and sum(1 for v in inter if v in x) < p * len(inter) - eta * pd:
                    return True
        return False

    def sample(rng: random.Random) -> set[int]:
        return {v for v in range(n) if rng.random() < p}

    events = [
        BadEvent("sample-size", size_bad),
        BadEvent("vertex-degrees", degree_bad),
        BadEvent("block-sizes", blocks_bad),
        BadEvent("spot-intersections", spots_bad),
        BadEvent("neighbourhood-unions", units_bad),
    ]
    res = run_until_good(
        FunctionSampler(sample),
        events,
        ResamplePolicy(max_rounds=max_rounds, seed=seed),
        "good-sample",
    )
    if not res.ok:
        raise BudgetError(
            f"good_sample exhausted {max_rounds} rounds; surviving events: "
            f"{res.certificate.surviving}"
        )
    cert = {
        "engine": res.certificate.to_json(),
        "u_sample": u_sample,
        "a1_ok": not (size_bad(res.structure) or degree_bad(res.structure)),
        "a2_ok": not spots_bad(res.structure),
        "a3_sampled_ok": not units_bad(res.structure),
    }
    return SampleSet(frozenset(res.structure), p, gamma, k, eta, family.spec.K, cert)


def iterated_sample_cores(
    g: Graph, x: frozenset[int], pd: float, gamma: float, k: int
) -> list[set[int]]:
    """Diagnostic only: X_0 .. X_k with X_j the vertices of X_{j-1} having at
    least (1-gamma/2)p*d neighbours in X_{j-1}."""
    cores = [set(x)]
    for _ in range(k):
        prev = cores[-1]
        need = (1 - gamma / 2) * pd
        cores.append(
            {v for v in prev if sum(1 for w in g.neighbors(v) if w in prev) >= need}
        )
    return cores


def is_approximable(
    g: Graph,
    x: set[int] | frozenset[int],
    h_vertices: set[int],
    k: int,
    eta: float,
    pd: float,
) -> tuple[bool, tuple[int, ...] | None]:
    """Is H close (within eta*pd symmetric difference) to a union of at most k
    X-neighbourhoods of vertices pairwise at most k apart?

    Greedy descent over BFS-ball candidates; returns the witness when found.
    """
    if not h_vertices <= set(x):
        raise PreconditionError("H must live inside X")
    budget = eta * pd

    def symdiff(cover: set[int]) -> int:
        return len(h_vertices ^ cover)

    # candidate centers: H itself plus everything near it
    cands: set[int] = set(h_vertices)
    for v in h_vertices:
        cands.update(g.neighbors(v))
    best_single = None
    best_val = None
    cover_of: dict[int, set[int]] = {}
    for v in sorted(cands):
        cov = {w for w in g.neighbors(v) if w in x}
        cover_of[v] = cov
        val = symdiff(cov)
        if best_val is None or val < best_val:
            best_single, best_val = v, val
    if best_single is None:
        return (len(h_vertices) <= budget, ()) if len(h_vertices) <= budget else (False, None)
    chosen = [best_single]
    cover = set(cover_of[best_single])
    while len(chosen) < k and symdiff(cover) > budget:
        # stay within pairwise distance k of chosen centers
        near: set[int] = set()
        for c in chosen:
            dist = {c: 0}
            dq = deque([c])
            while dq:
                a = dq.popleft()
                if dist[a] == k:
                    continue
                for b in g.neighbors(a):
                    if b not in dist:
                        dist[b] = dist[a] + 1
                        dq.append(b)
            near = set(dist) if not near else near & set(dist)
        improved = None
        cur = symdiff(cover)
        for v in sorted(near & cands):
            if v in chosen:
                continue
            val = symdiff(cover | cover_of.get(v, {w for w in g.neighbors(v) if w in x}))
            if val < cur:
                improved, cur = v, val
        if improved is None:
            break
        chosen.append(improved)
        cover |= cover_of.setdefault(
            improved, {w for w in g.neighbors(improved) if w in x}
        )
    if symdiff(cover) <= budget:
        return True, tuple(chosen)
    return False, None


# ---------------------------------------------------------------------------
# connecting forests into the family


@dataclass
class ConnectionResult:
    forests_prime: list[PathForest]
    forests_leftover: list[PathForest]
    q_connectors: list[int]  # per forest
    r_connectors: list[int]
    leftover_counts: list[int]
    leftover_target: float
    maximal: bool

    def to_json(self) -> dict:
        return {
            "q_connectors": self.q_connectors,
            "r_connectors": self.r_connectors,
            "leftover_counts": self.leftover_counts,
            "leftover_target": self.leftover_target,
            "maximal": self.maximal,
        }


def connect_forests_to_spots(
    g: Graph,
    family: DenseFamily,
    sample: SampleSet,
    forests: list[PathForest],
    k: int,
    seed: int,
    bounded_spec: BoundednessSpec | None = None,
    endpoint_quota: int | None = None,
) -> ConnectionResult:
    """Join forest paths through X (length <= 2k connectors), then hook path
    ends onto spots via X (length <= k), respecting sqrt(d) quotas.

    Returns per-forest split into paths with both ends in X + family (prime)
    and the rest (leftover), with counts reported against 16n/(K d).
    """
    d = family.spec.d
    x_set = set(sample.X)
    f_set = family.vertex_set()
    spot_of = family.spot_of()
    quota = endpoint_quota if endpoint_quota is not None else math.ceil(math.sqrt(d))

    interior_ok = x_set - f_set
    targets = sorted(x_set & f_set)
    target_set = set(targets)

    for forest in forests:
        bad = forest.vertices() & (x_set | f_set)
        if bad:
            raise PreconditionError(
                f"forest touches X or the family at {sorted(bad)[:5]}"
            )
    if bounded_spec is not None:
        rep = check_bounded(forests, bounded_spec, g)
        if not rep.ok:
            raise PreconditionError(
                f"forests fail boundedness audit: {rep.violations[:3]}"
            )

    used: set = set()
    for forest in forests:
        used |= forest.edge_set()

    rng = random.Random(f"connect:{seed}")
    end_quota: dict[int, int] = {}
    spot_quota: dict[tuple[int, int], int] = {}

    work = [forest.copy() for forest in forests]
    q_counts = [0] * len(work)
    r_counts = [0] * len(work)

    def bfs_connector(
        start: int,
        goal: set[int],
        allowed: set[int],
        max_len: int,
        forbid_vertices: set[int],
    ) -> Path | None:
        """Shortest path start -> goal with every interior vertex in
        `allowed` minus `forbid_vertices`, using only unused edges."""
        prev: dict[int, int] = {start: -1}
        frontier = [start]
        depth = 0
        while frontier and depth < max_len:
            nxt = []
            for v in frontier:
                for w in g.neighbors(v):
                    if w in prev or ekey(v, w) in used:
                        continue
                    if w in goal and w != start:
                        prev[w] = v
                        chain = [w]
                        while prev[chain[-1]] != -1:
                            chain.append(prev[chain[-1]])
                        return tuple(reversed(chain))
                    if w in allowed and w not in forbid_vertices:
                        prev[w] = v
                        nxt.append(w)
            frontier = nxt
            depth += 1
        return None

    def q_sweep(i: int) -> int:
        forest = work[i]
        joins = 0
        progress = True
        while progress:
            progress = False
            end_to_path: dict[int, int] = {}
            for pi, pth in enumerate(forest.paths):
                end_to_path.setdefault(pth[0], pi)
                end_to_path.setdefault(pth[-1], pi)
            endpoints = sorted(end_to_path)
            rng.shuffle(endpoints)
            for xv in endpoints:
                if xv not in end_to_path:
                    continue
                pi = end_to_path[xv]
                goal = {
                    e
                    for e, pj in end_to_path.items()
                    if pj != pi and e not in x_set
                }
                conn = bfs_connector(
                    xv, goal, interior_ok - forest.vertices(), 2 * k, set()
                )
                if conn is None:
                    continue
                yv = conn[-1]
                pj = end_to_path[yv]
                pa, pb = forest.paths[pi], forest.paths[pj]
                merged = join_paths(pa, pb, conn)
                forest.replace_paths({pi, pj}, [merged])
                for t_ in range(len(conn) - 1):
                    used.add(ekey(conn[t_], conn[t_ + 1]))
                joins += 1
                progress = True
                break
        return joins

    def r_sweep(i: int) -> int:
        forest = work[i]
        attached = 0
        progress = True
        while progress:
            progress = False
            for pi, pth in enumerate(forest.paths):
                for xv in {pth[0], pth[-1]}:
                    if xv in f_set:
                        continue
                    ok_targets = {
                        t
                        for t in target_set
                        if end_quota.get(t, 0) < quota
                        and spot_quota.get((spot_of[t], i), 0) < quota
                        and t not in forest.vertices()
                    }
                    if not ok_targets:
                        continue
                    conn = bfs_connector(
                        xv, ok_targets, interior_ok - forest.vertices(), k, set()
                    )
                    if conn is None:
                        continue
                    t = conn[-1]
                    new_path = join_paths(pth, (t,), conn)
                    forest.replace_paths({pi}, [new_path])
                    for t_ in range(len(conn) - 1):
                        used.add(ekey(conn[t_], conn[t_ + 1]))
                    end_quota[t] = end_quota.get(t, 0) + 1
                    key = (spot_of[t], i)
                    spot_quota[key] = spot_quota.get(key, 0) + 1
                    attached += 1
                    progress = True
                    break
                if progress:
                    break
        return attached

    for i in range(len(work)):
        q_counts[i] = q_sweep(i)
    for i in range(len(work)):
        r_counts[i] = r_sweep(i)

    # maximality rescan: a second pass must find nothing new
    rescan = sum(q_sweep(i) + r_sweep(i) for i in range(len(work)))
    maximal = rescan == 0

    prime: list[PathForest] = []
    leftover: list[PathForest] = []
    for forest in work:
        p_i = PathForest()
        l_i = PathForest()
        for pth in forest.paths:
            if pth[0] in target_set and pth[-1] in target_set and len(pth) > 1:
                p_i.add_path(pth)
            else:
                l_i.add_path(pth)
        prime.append(p_i)
        leftover.append(l_i)
    target = 16 * g.n / (family.spec.K * d) if family.spots else float("inf")
    return ConnectionResult(
        prime,
        leftover,
        q_counts,
        r_counts,
        [len(f) for f in leftover],
        target,
        maximal,
    )
