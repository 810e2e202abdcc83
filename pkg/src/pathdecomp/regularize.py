"""Near-regular subgraph machinery.

Peeling to a minimum degree, the one-step random regularization (delete
low-to-high edges and low vertices at rate eps), iterated versions that drive
the degree spread down to an additive C*log(d) band, and the decomposition of
a rough graph into few edge-disjoint nearly-regular slices.

Degree bands are always verified by a full audit, never trusted from
construction.
"""

from __future__ import annotations

import math
import random
import warnings
from dataclasses import dataclass

from .engine import BadEvent, EngineResult, FunctionSampler, ResamplePolicy, run_until_good
from .errors import CertificateError, PreconditionError
from .graph import Edge, Graph, Subgraph, ekey, identity_subgraph, induced_subgraph
from .mutable import MutGraph, peel_to_min_degree


@dataclass(frozen=True)
class DegreeBand:
    low: int
    high: int

    def __post_init__(self):
        if not (0 <= self.low <= self.high):
            raise PreconditionError(f"bad degree band {self}")

    def contains(self, x: int) -> bool:
        return self.low <= x <= self.high


@dataclass
class RegularSlice:
    """One edge-disjoint slice: (1 +- eta) d_i-regular, d_i even."""

    subgraph: Subgraph
    d_i: int
    eta: float

    def band(self) -> tuple[float, float]:
        return ((1 - self.eta) * self.d_i, (1 + self.eta) * self.d_i)

    def audit(self) -> None:
        lo, hi = self.band()
        if self.d_i % 2 != 0:
            raise CertificateError(f"slice degree {self.d_i} is odd")
        for v in range(self.subgraph.graph.n):
            deg = self.subgraph.graph.degree(v)
            if not lo <= deg <= hi:
                raise CertificateError(
                    f"slice vertex {self.subgraph.to_parent[v]} degree {deg} "
                    f"outside [{lo:.2f}, {hi:.2f}]"
                )

    def to_json(self) -> dict:
        return {
            "d_i": self.d_i,
            "eta": self.eta,
            "vertices": len(self.subgraph.to_parent),
            "edges": self.subgraph.graph.m,
            "id_map": list(self.subgraph.to_parent),
        }


def min_degree_subgraph(g: Graph, t: int) -> Subgraph | None:
    """Repeatedly delete vertices of degree < t; None if nothing survives."""
    if t < 1:
        raise PreconditionError(f"t must be >= 1, got {t}")
    mg = MutGraph.from_graph(g)
    alive = peel_to_min_degree(mg, t, within=set(range(g.n)))
    if not alive:
        return None
    return induced_subgraph(g, alive)


def _audit_degree_range(g: Graph, low: float, high: float, what: str) -> None:
    for v in range(g.n):
        if not low <= g.degree(v) <= high:
            raise PreconditionError(
                f"{what}: vertex {v} degree {g.degree(v)} outside "
                f"[{low:.2f}, {high:.2f}]"
            )


def regularize_step(
    g: Graph,
    d: int,
    gamma: float,
    eps: float,
    seed: int,
    policy: ResamplePolicy | None = None,
) -> tuple[Subgraph, int]:
    """One random regularization step.

    Input degrees must lie in [d, (1+gamma)d] with gamma >= 10*eps. Deletes
    each low-to-high edge and each low vertex independently at rate eps,
    resampling until the surviving degrees sit in the target band. Returns
    the surviving induced subgraph and the new reference degree d'.
    """
    if eps <= 0 or eps * d < 1:
        raise PreconditionError(
            f"eps*d >= 1 required (eps={eps}, d={d}); step cannot act at this scale"
        )
    if gamma < 10 * eps:
        raise PreconditionError(f"need gamma >= 10*eps, got gamma={gamma}, eps={eps}")
    if eps * d < 1e3 * math.log(max(d, 2)):
        warnings.warn(
            f"regularize_step below the asymptotic gate eps*d >= 1e3*log(d) "
            f"(eps*d={eps * d:.1f}); proceeding as a search",
            stacklevel=2,
        )
    _audit_degree_range(g, d, (1 + gamma) * d + 1e-9, "regularize_step precondition")

    # drop edges between two over-degree vertices first (paper's normalization)
    mg = MutGraph.from_graph(g)
    changed = True
    while changed:
        changed = False
        for v in range(g.n):
            if len(mg.adj[v]) <= d:
                continue
            for w in sorted(mg.adj[v]):
                if len(mg.adj[w]) > d:
                    mg.remove_edge(v, w)
                    changed = True
                    break
            if changed:
                break
    base = mg.to_graph()

    threshold = (1 + gamma / 2) * d
    u_low = [v for v in range(base.n) if base.degree(v) <= threshold]
    u_low_set = set(u_low)
    lh_edges = [
        e
        for e in base.edges()
        if (e[0] in u_low_set) != (e[1] in u_low_set)
    ]

    lo_target = (1 - 5 * eps / 4) * d
    hi_target = (1 - 7 * eps / 4) * (1 + gamma) * d
    blocks: list[list[int]] = []
    block_size = max(2, d)
    ordered = list(range(base.n))
    for i in range(0, base.n, block_size):
        blocks.append(ordered[i : i + block_size])

    def sample(rng: random.Random) -> tuple[set[int], set[Edge]]:
        dead = {v for v in u_low if rng.random() < eps}
        gone = {e for e in lh_edges if rng.random() < eps}
        return dead, gone

    def survivors(draw: tuple[set[int], set[Edge]]) -> tuple[set[int], dict[int, int]]:
        dead, gone = draw
        deg = {}
        for v in range(base.n):
            if v in dead:
                continue
            cnt = 0
            for w in base.neighbors(v):
                if w in dead:
                    continue
                if ekey(v, w) in gone:
                    continue
                cnt += 1
            deg[v] = cnt
        return set(deg), deg

    def degree_event(draw) -> bool:
        _, deg = survivors(draw)
        return any(not (lo_target - 1e-9 <= dv <= hi_target + 1e-9) for dv in deg.values())

    def block_event(draw) -> bool:
        dead, _ = draw
        for blk in blocks:
            lost = sum(1 for v in blk if v in dead)
            if lost > 2 * eps * len(blk):
                return True
        return False

    events = [
        BadEvent("degree-band", degree_event),
        BadEvent("block-sizes", block_event),
    ]
    pol = policy or ResamplePolicy(max_rounds=200, seed=seed)
    res: EngineResult = run_until_good(FunctionSampler(sample), events, pol, "regularize-step")
    if not res.ok:
        raise CertificateError(
            f"regularize_step budget exhausted; surviving events: "
            f"{res.certificate.surviving}"
        )
    alive, _ = survivors(res.structure)
    dead, gone = res.structure
    kept_edges = [
        e
        for e in base.edges()
        if e[0] in alive and e[1] in alive and e not in gone
    ]
    keep = sorted(alive)
    index = {v: i for i, v in enumerate(keep)}
    local = Graph(len(keep), [(index[u], index[v]) for u, v in kept_edges])
    sub = Subgraph(local, tuple(keep))
    d_new = max(1, math.floor(lo_target))
    _audit_degree_range(local, d_new, (1 + gamma) * (1 - eps / 2) * d_new + 1, "regularize_step post")
    if len(keep) < (1 - 2 * eps) * g.n:
        raise CertificateError("regularize_step lost more than 2*eps of the vertices")
    return sub, d_new


def trim_to_band(g: Graph, width: float, min_keep_frac: float = 0.0) -> Subgraph:
    """Deterministic fallback: delete over-degree edges / peel light vertices
    until max_degree <= min_degree + width on the surviving vertices."""
    mg = MutGraph.from_graph(g)
    alive = set(mg.vertices_with_degree())
    while alive:
        degs = {v: len(mg.adj[v] & alive) for v in alive}
        lo = min(degs.values())
        hi = max(degs.values())
        if hi <= lo + width:
            break
        # prefer removing an edge between two heavy vertices
        heavy = sorted(v for v, dv in degs.items() if dv > lo + width)
        removed = False
        for v in heavy:
            for w in sorted(mg.adj[v] & alive, key=lambda x: -degs[x]):
                if degs[w] > lo + width / 2:
                    mg.remove_edge(v, w)
                    removed = True
                    break
            if removed:
                break
        if not removed:
            # peel the lightest vertex instead
            v = min(alive, key=lambda x: (degs[x], x))
            mg.remove_vertex(v)
            alive.discard(v)
        alive = {v for v in alive if mg.adj[v] & alive}
    return induced_subgraph(g, alive) if alive else Subgraph(Graph(0, []), ())


def spanning_near_regular(
    g: Graph, d: int, gamma: float, seed: int, C: float = 8.0
) -> tuple[Subgraph, DegreeBand]:
    """Shrink a (d..(1+gamma)d)-degree graph to an additive C*log(d') band,
    keeping almost all vertices, by halving gamma each round."""
    if gamma > 1 / 100:
        raise PreconditionError(f"gamma <= 1/100 required, got {gamma}")
    _audit_degree_range(g, d, (1 + gamma) * d + 1e-9, "spanning_near_regular precondition")
    cur = identity_subgraph(g)
    d_cur, gamma_cur = d, gamma
    i = 0
    while True:
        width_ok = (1 + gamma_cur) * d_cur <= d_cur + C * math.log(max(d_cur, 2))
        eps = gamma_cur / 10
        if width_ok or eps * d_cur < 1:
            break
        sub, d_new = regularize_step(cur.graph, d_cur, gamma_cur, eps, seed + i)
        cur = cur.compose(sub)
        d_cur = d_new
        gamma_cur = gamma_cur / 2
        i += 1
    lo = cur.graph.min_degree() if cur.graph.n else 0
    hi = cur.graph.max_degree() if cur.graph.n else 0
    band = DegreeBand(lo, hi)
    if hi > lo + C * math.log(max(lo, 2)) + 1e-9:
        raise CertificateError(
            f"spanning_near_regular band [{lo},{hi}] wider than C*log(d')"
        )
    if lo < (1 - 40 * gamma) * d:
        raise CertificateError(f"spanning_near_regular degree dropped to {lo}")
    return cur, band


def near_regular_subgraph(
    g: Graph,
    d: int,
    C: float,
    seed: int = 0,
    C_prime: float = 8.0,
    rel_width: float | None = None,
) -> tuple[Subgraph, DegreeBand]:
    """Inside a graph with degrees in [d, C*d], find a subgraph with degrees
    in [d', d' + C'*log d'] for some d' >= d/C'.

    `rel_width` optionally tightens the target to width <= rel_width * d'
    (useful at small d, where C'*log d' is not far below d')."""
    _audit_degree_range(g, d, C * d + 1e-9, "near_regular_subgraph precondition")

    def width_for(lo: int) -> float:
        w = C_prime * math.log(max(lo, 2))
        if rel_width is not None:
            w = min(w, rel_width * lo)
        return w

    cur = identity_subgraph(g)
    for i in range(60):
        if cur.graph.n == 0:
            break
        lo = cur.graph.min_degree()
        hi = cur.graph.max_degree()
        if hi <= lo + width_for(lo):
            break
        gamma_cur = hi / max(lo, 1) - 1
        eps = min(1 / 100, gamma_cur / 10)
        if eps * lo < 1:
            cur = cur.compose(trim_to_band(cur.graph, width_for(lo)))
            break
        try:
            sub, _ = regularize_step(cur.graph, lo, gamma_cur, eps, seed + i)
        except (CertificateError, PreconditionError):
            cur = cur.compose(trim_to_band(cur.graph, width_for(lo)))
            break
        cur = cur.compose(sub)
    if cur.graph.n == 0:
        raise CertificateError("near_regular_subgraph emptied the graph")
    lo = cur.graph.min_degree()
    hi = cur.graph.max_degree()
    band = DegreeBand(lo, hi)
    if hi > lo + C_prime * math.log(max(lo, 2)) + 1e-9:
        raise CertificateError(f"near_regular_subgraph band [{lo},{hi}] too wide")
    if lo < d / max(C_prime, 1.0):
        raise CertificateError(
            f"near_regular_subgraph degree {lo} fell below d/C' = {d / C_prime:.1f}"
        )
    return cur, band


# ---------------------------------------------------------------------------
# slices


def _finish_slice(
    host_n: int, edges: list[Edge], eta_cfg: float, min_d: float
) -> tuple[Subgraph, int, float] | None:
    """Trim an edge set to a declared even-degree band; None if it dies."""
    mg = MutGraph.from_edges(host_n, edges)
    alive = set(mg.vertices_with_degree())
    guard = len(edges) + host_n + 1
    while alive and guard > 0:
        guard -= 1
        degs = {v: len(mg.adj[v] & alive) for v in alive}
        lo = min(degs.values())
        hi = max(degs.values())
        d_t = max(2, int((lo + hi) / 2) // 2 * 2)
        eta_a = max(hi / d_t - 1, 1 - lo / d_t)
        if eta_a <= eta_cfg:
            if d_t < min_d:
                return None
            sub_vertices = sorted(alive)
            index = {v: i for i, v in enumerate(sub_vertices)}
            local_edges = [
                (index[u], index[v])
                for u, v in mg.edges()
                if u in alive and v in alive
            ]
            sub = Subgraph(Graph(len(sub_vertices), local_edges), tuple(sub_vertices))
            return sub, d_t, eta_a
        if hi - d_t >= d_t - lo:
            # remove one edge at a heaviest vertex, preferring heavy partners
            v = max(alive, key=lambda x: (degs[x], -x))
            w = max(mg.adj[v] & alive, key=lambda x: (degs[x], -x))
            mg.remove_edge(v, w)
        else:
            v = min(alive, key=lambda x: (degs[x], x))
            mg.remove_vertex(v)
            alive.discard(v)
        alive = {v for v in alive if mg.adj[v] & alive}
    return None


def regular_slices(
    g: Graph,
    d: int,
    mu: float,
    eps: float,
    seed: int,
    eta: float = 0.3,
    beta_floor: float | None = None,
) -> tuple[list[RegularSlice], set[Edge]]:
    """Decompose most of a max-degree-d graph into edge-disjoint nearly-regular
    slices with even target degrees d_i, sum d_i <= (1+eps)d.

    Returns (slices, uncovered edges). Audits: pairwise edge-disjointness,
    per-slice band membership, the degree-sum cap, and the uncovered-edge
    bound eps*|V|*d.
    """
    if g.max_degree() > d:
        raise PreconditionError(f"max degree {g.max_degree()} exceeds d={d}")
    if not (0 < mu < 1) or not (0 < eps <= 1):
        raise PreconditionError(f"bad parameters mu={mu}, eps={eps}")
    n = g.n
    rng = random.Random(f"slices:{seed}")
    beta = beta_floor if beta_floor is not None else max(mu, eps / 6)

    # maximal collection of near-regular subgraphs H_i on the residual,
    # one per peeled component (components may differ wildly in density)
    residual = MutGraph.from_graph(g)
    subs: list[tuple[Subgraph, int]] = []  # (subgraph in g-ids, d_i')
    while residual.edge_count() > eps * n * d / 3:
        t = max(1, math.ceil(eps * d / 3))
        work = residual.copy()
        alive = peel_to_min_degree(work, t, set(range(n)))
        if not alive:
            break
        from .mutable import components

        found_any = False
        for comp in components(work, alive):
            peeled = induced_subgraph(work.to_graph(), comp)
            lo = peeled.graph.min_degree()
            hi = peeled.graph.max_degree()
            try:
                sub, band = near_regular_subgraph(
                    peeled.graph,
                    lo,
                    C=max(1.0, hi / max(lo, 1)),
                    seed=seed + len(subs),
                    rel_width=eta,
                )
            except CertificateError:
                continue
            h = peeled.compose(sub)
            d_ip = band.low
            if d_ip < beta * d:
                continue
            found_any = True
            subs.append((h, d_ip))
            for u in range(h.graph.n):
                pu = h.to_parent[u]
                for w in h.graph.neighbors(u):
                    if w > u:
                        residual.remove_edge(pu, h.to_parent[w])
        if not found_any:
            break

    if not subs:
        uncovered = set(g.edges())
        if len(uncovered) > eps * n * d:
            raise CertificateError(
                f"no slices found and {len(uncovered)} uncovered edges exceed "
                f"eps*n*d = {eps * n * d:.0f}"
            )
        return [], uncovered

    k = max(1, round(1 / (2 * mu)))
    # disjoint slice-index allocation per vertex: for each H_i containing v,
    # exactly floor(beta_i * k) indices, blocks cut from a random permutation
    beta_is = [min(1.0, d_ip / d) for _, d_ip in subs]
    member: dict[int, list[int]] = {}
    for i, (h, _) in enumerate(subs):
        for v in h.to_parent:
            member.setdefault(v, []).append(i)
    alloc: dict[tuple[int, int], set[int]] = {}
    for v, idxs in sorted(member.items()):
        perm = list(range(k))
        rng.shuffle(perm)
        pos = 0
        for i in idxs:
            take = max(1, math.floor(beta_is[i] * k))
            take = min(take, k - pos)
            alloc[(v, i)] = set(perm[pos : pos + take])
            pos += take

    slice_edges: list[list[Edge]] = [[] for _ in range(k)]
    dropped: list[Edge] = []
    for i, (h, _) in enumerate(subs):
        for u in range(h.graph.n):
            pu = h.to_parent[u]
            for w in h.graph.neighbors(u):
                if w <= u:
                    continue
                pw = h.to_parent[w]
                common = sorted(alloc[(pu, i)] & alloc[(pw, i)])
                e = ekey(pu, pw)
                if not common:
                    dropped.append(e)
                    continue
                j = common[rng.randrange(len(common))]
                slice_edges[j].append(e)

    slices: list[RegularSlice] = []
    uncovered: set[Edge] = set(dropped)
    for j in range(k):
        if not slice_edges[j]:
            continue
        fin = _finish_slice(n, slice_edges[j], eta, min_d=mu * d)
        if fin is None:
            uncovered.update(slice_edges[j])
            continue
        sub, d_t, eta_a = fin
        kept = set()
        for u in range(sub.graph.n):
            for w in sub.graph.neighbors(u):
                if w > u:
                    kept.add(ekey(sub.to_parent[u], sub.to_parent[w]))
        uncovered.update(e for e in slice_edges[j] if e not in kept)
        slices.append(RegularSlice(sub, d_t, eta_a))

    # enforce the degree-sum cap, cheapest slices first
    slices.sort(key=lambda s: -s.subgraph.graph.m)
    while slices and sum(s.d_i for s in slices) > (1 + eps) * d:
        dropped_slice = slices.pop()
        for u in range(dropped_slice.subgraph.graph.n):
            for w in dropped_slice.subgraph.graph.neighbors(u):
                if w > u:
                    uncovered.add(
                        ekey(
                            dropped_slice.subgraph.to_parent[u],
                            dropped_slice.subgraph.to_parent[w],
                        )
                    )

    uncovered.update(residual.edges())

    # audits: disjointness, bands, uncovered bound
    seen: set[Edge] = set()
    for s in slices:
        s.audit()
        for u in range(s.subgraph.graph.n):
            for w in s.subgraph.graph.neighbors(u):
                if w > u:
                    e = ekey(s.subgraph.to_parent[u], s.subgraph.to_parent[w])
                    if e in seen:
                        raise CertificateError(f"edge {e} appears in two slices")
                    seen.add(e)
    if len(seen) + len(uncovered) != g.m:
        missing = g.m - len(seen) - len(uncovered)
        raise CertificateError(f"edge conservation failed by {missing}")
    if len(uncovered) > eps * n * d:
        raise CertificateError(
            f"{len(uncovered)} uncovered edges exceed eps*n*d = {eps * n * d:.0f}"
        )
    return slices, uncovered
