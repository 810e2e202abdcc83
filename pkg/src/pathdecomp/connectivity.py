"""Sparse-cut connectivity certificates and short connecting paths.

A graph is (zeta, lambda, d)-connected when no deletion of <= lambda*d^2
edges separates two vertex sets of size >= zeta*d each. Disconnection
witnesses are found by the thin-BFS-layer argument plus exact s-t max-flow
sweeps on small graphs; every witness is re-verified before being returned,
so "disconnected" verdicts are sound while "connected" records the searches
that failed.
"""

from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass, field

from .engine import BadEvent, FunctionSampler, ResamplePolicy, run_until_good
from .errors import CertificateError, PartitionError, PreconditionError
from .forests import Path
from .graph import Edge, Graph, ekey, induced_subgraph
from .mutable import MutGraph
from .verify import DenseSpotSpec, check_dense_spot


@dataclass(frozen=True)
class ConnectivitySpec:
    zeta: float
    lam: float
    d: int

    def __post_init__(self):
        if not (0 < self.zeta <= 1) or not (0 < self.lam <= 1) or self.d < 1:
            raise PreconditionError(f"bad connectivity spec {self}")

    @property
    def side_min(self) -> float:
        return self.zeta * self.d

    @property
    def cut_max(self) -> float:
        return self.lam * self.d * self.d


@dataclass
class CutWitness:
    edges: list[Edge]
    side_a: set[int]
    side_b: set[int]

    def to_json(self) -> dict:
        return {
            "edges": [list(e) for e in self.edges],
            "side_a": sorted(self.side_a),
            "side_b": sorted(self.side_b),
        }


@dataclass
class ConnectivityCertificate:
    connected: bool
    spec: ConnectivitySpec
    trivial: bool = False
    witness: CutWitness | None = None
    searches: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "connected": self.connected,
            "trivial": self.trivial,
            "spec": {"zeta": self.spec.zeta, "lambda": self.spec.lam, "d": self.spec.d},
            "witness": self.witness.to_json() if self.witness else None,
            "searches": list(self.searches),
        }


def _verify_witness(g: Graph, spec: ConnectivitySpec, w: CutWitness) -> bool:
    if w.side_a & w.side_b:
        return False
    if len(w.side_a) < spec.side_min or len(w.side_b) < spec.side_min:
        return False
    if len(w.edges) > spec.cut_max:
        return False
    cut = set(w.edges)
    for u in w.side_a:
        for v in g.neighbors(u):
            if v in w.side_b and ekey(u, v) not in cut:
                return False
    return True


def _layer_witness(g: Graph, spec: ConnectivitySpec, seed_vertex: int) -> CutWitness | None:
    n = g.n
    dist = [-1] * n
    dist[seed_vertex] = 0
    order = [seed_vertex]
    dq = deque([seed_vertex])
    while dq:
        v = dq.popleft()
        for w in g.neighbors(v):
            if dist[w] == -1:
                dist[w] = dist[v] + 1
                dq.append(w)
                order.append(w)
    maxd = max((dist[v] for v in order), default=0)
    layers: list[list[int]] = [[] for _ in range(maxd + 1)]
    for v in order:
        layers[dist[v]].append(v)
    inside = 0
    reached = len(order)
    unreached = n - reached
    for j in range(maxd + 1):
        inside += len(layers[j])
        outside = n - inside
        if inside < spec.side_min or outside < spec.side_min:
            continue
        cut_edges = []
        nxt = set(layers[j + 1]) if j + 1 <= maxd else set()
        for u in layers[j]:
            for v in g.neighbors(u):
                if v in nxt:
                    cut_edges.append(ekey(u, v))
        if unreached:
            # unreachable vertices sit beyond an empty cut at the frontier
            pass
        if len(cut_edges) <= spec.cut_max:
            side_a = {v for v in range(n) if dist[v] != -1 and dist[v] <= j}
            side_b = set(range(n)) - side_a
            w = CutWitness(sorted(set(cut_edges)), side_a, side_b)
            if _verify_witness(g, spec, w):
                return w
    return None


class _Dinic:
    def __init__(self, n: int):
        self.n = n
        self.head: list[list[int]] = [[] for _ in range(n)]
        self.to: list[int] = []
        self.cap: list[int] = []

    def add(self, u: int, v: int, c: int) -> None:
        self.head[u].append(len(self.to))
        self.to.append(v)
        self.cap.append(c)
        self.head[v].append(len(self.to))
        self.to.append(u)
        self.cap.append(0)

    def max_flow(self, s: int, t: int, limit: int) -> int:
        flow = 0
        while flow <= limit:
            level = [-1] * self.n
            level[s] = 0
            dq = deque([s])
            while dq:
                v = dq.popleft()
                for eid in self.head[v]:
                    if self.cap[eid] > 0 and level[self.to[eid]] == -1:
                        level[self.to[eid]] = level[v] + 1
                        dq.append(self.to[eid])
            if level[t] == -1:
                return flow
            it = [0] * self.n

            def dfs(v: int, f: int) -> int:
                if v == t:
                    return f
                while it[v] < len(self.head[v]):
                    eid = self.head[v][it[v]]
                    w = self.to[eid]
                    if self.cap[eid] > 0 and level[w] == level[v] + 1:
                        got = dfs(w, min(f, self.cap[eid]))
                        if got:
                            self.cap[eid] -= got
                            self.cap[eid ^ 1] += got
                            return got
                    it[v] += 1
                return 0

            while True:
                pushed = dfs(s, 1 << 30)
                if not pushed:
                    break
                flow += pushed
                if flow > limit:
                    return flow
        return flow

    def reachable(self, s: int) -> set[int]:
        seen = {s}
        dq = deque([s])
        while dq:
            v = dq.popleft()
            for eid in self.head[v]:
                if self.cap[eid] > 0 and self.to[eid] not in seen:
                    seen.add(self.to[eid])
                    dq.append(self.to[eid])
        return seen


def _flow_witness(
    g: Graph, spec: ConnectivitySpec, s: int, t: int
) -> CutWitness | None:
    dn = _Dinic(g.n)
    for u, v in g.edges():
        dn.add(u, v, 1)
        dn.add(v, u, 1)
    limit = int(spec.cut_max)
    flow = dn.max_flow(s, t, limit)
    if flow > spec.cut_max:
        return None
    side_a = dn.reachable(s)
    side_b = set(range(g.n)) - side_a
    cut = [
        ekey(u, v)
        for u in side_a
        for v in g.neighbors(u)
        if v in side_b
    ]
    w = CutWitness(sorted(set(cut)), side_a, side_b)
    return w if _verify_witness(g, spec, w) else None


def check_connectivity(
    g: Graph, spec: ConnectivitySpec, exact_cap: int = 2000, pair_budget: int = 64
) -> ConnectivityCertificate:
    """Certificate-based connectivity check; witnesses are always sound."""
    searches: list[str] = []
    if g.n < 2 * spec.side_min:
        return ConnectivityCertificate(True, spec, trivial=True, searches=["trivial-size"])

    # layer search from a deterministic seed sample
    step = max(1, g.n // 16)
    seeds = list(range(0, g.n, step))
    searches.append(f"layers:{len(seeds)}")
    for sv in seeds:
        w = _layer_witness(g, spec, sv)
        if w is not None:
            return ConnectivityCertificate(False, spec, witness=w, searches=searches)

    if g.n <= exact_cap:
        if g.n * (g.n - 1) // 2 <= pair_budget:
            pairs = [(s, t) for s in range(g.n) for t in range(s + 1, g.n)]
        else:
            rng = random.Random(f"connpairs:{g.n}:{g.m}")
            pairs = []
            seen = set()
            while len(pairs) < pair_budget:
                s = rng.randrange(g.n)
                t = rng.randrange(g.n)
                if s != t and (s, t) not in seen:
                    seen.add((s, t))
                    pairs.append((s, t))
        searches.append(f"flow-pairs:{len(pairs)}")
        for s, t in pairs:
            w = _flow_witness(g, spec, s, t)
            if w is not None:
                return ConnectivityCertificate(False, spec, witness=w, searches=searches)
    return ConnectivityCertificate(True, spec, searches=searches)


@dataclass
class ConnectedPartition:
    pieces: list[set[int]]
    junk: set[int]
    deleted_edges: list[Edge]
    certificates: list[ConnectivityCertificate]

    def to_json(self) -> dict:
        return {
            "pieces": [sorted(p) for p in self.pieces],
            "junk": sorted(self.junk),
            "deleted_edges": [list(e) for e in self.deleted_edges],
        }


def partition_connected(
    g: Graph, beta: float, d: int, K: float, lam: float
) -> ConnectedPartition:
    """Split a (beta,d,K)-dense graph into (lambda^{1/4}, lambda, d)-connected
    pieces along witness cuts; J collects vertices hit by many deleted edges.
    """
    if beta > 1 / 4:
        raise PreconditionError(f"beta <= 1/4 required, got {beta}")
    if not check_dense_spot(g, range(g.n), DenseSpotSpec(beta, d, K)):
        raise PreconditionError("input is not (beta,d,K)-dense")
    zeta = lam ** 0.25
    spec = ConnectivitySpec(zeta, lam, d)
    deleted: list[Edge] = []
    certs: list[ConnectivityCertificate] = []
    work = MutGraph.from_graph(g)
    queue: list[set[int]] = [set(range(g.n))]
    done: list[set[int]] = []
    while queue:
        piece = queue.pop()
        sub = induced_subgraph(work.to_graph(), piece)
        cert = check_connectivity(sub.graph, spec)
        certs.append(cert)
        if cert.connected:
            done.append(piece)
            continue
        w = cert.witness
        assert w is not None
        for e in w.edges:
            pe = sub.lift_edge(e)
            work.remove_edge(*pe)
            deleted.append(pe)
        queue.append({sub.to_parent[v] for v in w.side_a})
        queue.append({sub.to_parent[v] for v in w.side_b})

    deleted_incidence: dict[int, int] = {}
    for u, v in deleted:
        deleted_incidence[u] = deleted_incidence.get(u, 0) + 1
        deleted_incidence[v] = deleted_incidence.get(v, 0) + 1
    junk = {
        v for v, c in deleted_incidence.items() if c > (lam ** 0.2) * d
    }

    done.sort(key=lambda p: (-len(p), min(p) if p else -1))
    part = ConnectedPartition(done, junk, deleted, certs)
    # audits per the lemma's conclusions
    if len(junk) > math.sqrt(lam) * d:
        raise PartitionError(f"|J| = {len(junk)} exceeds sqrt(lambda)*d")
    if len(done) > 2 * K:
        raise PartitionError(f"{len(done)} pieces exceed 2K = {2 * K}")
    spot2 = DenseSpotSpec(min(2 * beta, 0.999), d, K)
    for piece in done:
        rest = piece - junk
        if rest and not check_dense_spot(g, rest, spot2):
            raise PartitionError("piece minus junk lost (2*beta,d,K)-density")
    internal = sum(
        1
        for u, v in g.edges()
        if any(u in p and v in p for p in done) and ekey(u, v) not in set(deleted)
    )
    if internal + len(deleted) != g.m:
        raise PartitionError("edge conservation failed in partition")
    return part



def short_path(
    g: Graph,
    u_set: set[int],
    v_set: set[int],
    spec: ConnectivitySpec,
    K: float,
    size_in_n: bool = False,
) -> Path:
    """BFS a U-V path of length <= 8K/lambda; requires a connectivity
    certificate to hold (a longer distance means the certificate lied).

    `size_in_n` switches the set-size precondition from zeta*d (the
    definitional reading) to zeta*|V(g)|.
    """
    if not u_set or not v_set:
        raise PreconditionError("empty endpoint set")
    floor_size = spec.zeta * (g.n if size_in_n else spec.d)
    if len(u_set) < floor_size or len(v_set) < floor_size:
        raise PreconditionError(
            f"|U|={len(u_set)}, |V|={len(v_set)} below zeta floor {floor_size:.1f}"
        )
    if g.n > K * spec.d:
        raise PreconditionError(f"|V(g)|={g.n} exceeds K*d={K * spec.d:.0f}")
    common = sorted(u_set & v_set)
    if common:
        return (common[0],)
    bound = math.ceil(8 * K / spec.lam)
    prev: dict[int, int] = {u: -1 for u in u_set}
    frontier = sorted(u_set)
    depth = 0
    while frontier and depth < bound:
        nxt = []
        for v in frontier:
            for w in g.neighbors(v):
                if w not in prev:
                    prev[w] = v
                    if w in v_set:
                        path = [w]
                        while prev[path[-1]] != -1:
                            path.append(prev[path[-1]])
                        return tuple(reversed(path))
                    nxt.append(w)
        frontier = nxt
        depth += 1
    raise CertificateError(
        f"no U-V path within 8K/lambda = {bound}; connectivity certificate broken"
    )


@dataclass
class ShortPathFamily:
    paths: list[Path]
    target: float

    def meets_target(self) -> bool:
        return len(self.paths) >= self.target


def edge_disjoint_short_paths(
    g: Graph,
    u_set: set[int],
    v_set: set[int],
    spec: ConnectivitySpec,
    K: float,
) -> ShortPathFamily:
    """Greedy maximal family of edge-disjoint U-V paths, shortest first, each
    of length <= 16K/lambda. The count is reported against lambda^2 d^2 / 32K,
    never asserted."""
    bound = math.ceil(16 * K / spec.lam)
    target = spec.lam**2 * spec.d**2 / (32 * K)
    paths: list[Path] = [(v,) for v in sorted(u_set & v_set)]
    residual = MutGraph.from_graph(g)
    while True:
        prev: dict[int, int] = {u: -1 for u in u_set}
        frontier = sorted(u_set)
        found: Path | None = None
        depth = 0
        while frontier and depth < bound and found is None:
            nxt = []
            for v in frontier:
                for w in sorted(residual.adj[v]):
                    if w not in prev:
                        prev[w] = v
                        if w in v_set and w not in u_set:
                            chain = [w]
                            while prev[chain[-1]] != -1:
                                chain.append(prev[chain[-1]])
                            found = tuple(reversed(chain))
                            break
                        nxt.append(w)
                if found:
                    break
            frontier = nxt
            depth += 1
        if found is None:
            break
        for i in range(len(found) - 1):
            residual.remove_edge(found[i], found[i + 1])
        paths.append(found)
    return ShortPathFamily(paths, target)


@dataclass
class ConnectorSet:
    vertices: set[int]
    pair_sample: list[tuple[int, int, int]]  # (v, w, paths found)
    target: int
    certificate_ok: bool

    def to_json(self) -> dict:
        return {
            "size": len(self.vertices),
            "vertices": sorted(self.vertices),
            "pair_sample": [list(t) for t in self.pair_sample],
            "target": self.target,
            "certificate_ok": self.certificate_ok,
        }


def connector_set(
    g: Graph,
    spec: ConnectivitySpec,
    K: float,
    q: float,
    eps: float,
    seed: int,
    pair_count: int = 200,
    target: int | None = None,
    max_rounds: int = 60,
) -> ConnectorSet:
    """A small vertex set W such that sampled vertex pairs (v, w) admit many
    edge-disjoint short N(v)-N(w) paths inside g[W]; drawn by eps-inclusion
    through the resample engine and certified on the sample."""
    if g.min_degree() < spec.zeta * spec.d:
        raise PreconditionError("min degree below zeta*d")
    if g.max_degree() > spec.d:
        raise PreconditionError("max degree above d")
    if g.n > K * spec.d:
        raise PreconditionError("graph larger than K*d")
    want = target if target is not None else max(1, int(q * spec.d * spec.d))
    len_cap = max(2, math.floor(1 / q))

    rng_pairs = random.Random(f"connector-pairs:{seed}")
    pairs: list[tuple[int, int]] = []
    seen = set()
    budget = pair_count * 20
    while len(pairs) < pair_count and budget > 0:
        budget -= 1
        v = rng_pairs.randrange(g.n)
        w = rng_pairs.randrange(g.n)
        if v != w and (v, w) not in seen:
            seen.add((v, w))
            pairs.append((v, w))

    def sample(rng: random.Random) -> set[int]:
        return {v for v in range(g.n) if rng.random() < eps}

    def count_pair(wset: set[int], v: int, w: int) -> int:
        sub = induced_subgraph(g, wset)
        local = {x: i for i, x in enumerate(sub.to_parent)}
        nu = {local[x] for x in g.neighbors(v) if x in local}
        nv = {local[x] for x in g.neighbors(w) if x in local}
        if not nu or not nv:
            return 0
        # edge-disjoint short paths inside g[W]
        bound = len_cap
        residual = MutGraph.from_graph(sub.graph)
        cnt = len(nu & nv)
        while True:
            prev = {u: -1 for u in nu}
            frontier = sorted(nu)
            found = None
            depth = 0
            while frontier and depth < bound and found is None:
                nxt = []
                for a in frontier:
                    for b in sorted(residual.adj[a]):
                        if b not in prev:
                            prev[b] = a
                            if b in nv and b not in nu:
                                chain = [b]
                                while prev[chain[-1]] != -1:
                                    chain.append(prev[chain[-1]])
                                found = chain
                                break
                            nxt.append(b)
                    if found:
                        break
                frontier = nxt
                depth += 1
            if found is None:
                break
            for i in range(len(found) - 1):
                residual.remove_edge(found[i], found[i + 1])
            cnt += 1
        return cnt

    def size_bad(wset: set[int]) -> bool:
        return len(wset) > 2 * eps * g.n or len(wset) == 0

    def degree_bad(wset: set[int]) -> bool:
        return any(
            sum(1 for x in g.neighbors(v) if x in wset) > 2 * eps * spec.d
            for v in range(g.n)
        )

    def pairs_bad(wset: set[int]) -> bool:
        return any(count_pair(wset, v, w) < want for v, w in pairs)

    events = [
        BadEvent("w-size", size_bad),
        BadEvent("w-degrees", degree_bad),
        BadEvent("w-pair-paths", pairs_bad),
    ]
    res = run_until_good(
        FunctionSampler(sample),
        events,
        ResamplePolicy(max_rounds=max_rounds, seed=seed),
        "connector-set",
    )
    wset = res.structure
    sample_log = [(v, w, count_pair(wset, v, w)) for v, w in pairs]
    return ConnectorSet(wset, sample_log, want, res.ok)
