"""Decomposing dense spots (with attached paths) into fixed-length paths.

The route: pack the requested forest shapes into an auxiliary complete graph
on the partition classes, realize them through per-pair matchings, join the
fragments (and any attached path) into one long path using direct edges and
a small connector set W, tune the total length to a multiple of the target,
and chop. Every stage conserves edges exactly; the leftover is reported.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .connectivity import (ConnectivitySpec, check_connectivity, connector_set,
                           partition_connected)
from .engine import BadEvent, FunctionSampler, ResamplePolicy, run_until_good
from .errors import (CertificateError, PackingError, PartitionError,
                     PreconditionError)
from .forests import Path, PathForest, chop_path, join_paths, path_edges
from .graph import Edge, Graph, ekey, induced_subgraph
from .matchings import bipartite_edge_coloring, ks_rotation_paths
from .mutable import MutGraph
from .verify import DenseSpotSpec, check_dense_spot


# ---------------------------------------------------------------------------
# packing paths into K_m


def complete_path_packing(
    lengths: list[int], m: int, seed: int = 0, repair_budget: int | None = None
) -> list[Path]:
    """Edge-disjoint paths with the given edge counts inside K_m.

    Uniform lengths dividing m-1 are served exactly by chopping the rotation
    Hamilton paths; anything else falls back to greedy longest-first walks
    with rotation repair. Raises PackingError when a path cannot be placed.
    """
    if any(l < 1 for l in lengths):
        raise PreconditionError("path lengths must be >= 1")
    if any(l > m - 1 for l in lengths):
        raise PreconditionError(f"length exceeds m-1 = {m - 1}")
    total = sum(lengths)
    if total > m * (m - 1) // 2:
        raise PreconditionError(
            f"total length {total} exceeds |E(K_{m})| = {m * (m - 1) // 2}"
        )
    if not lengths:
        return []

    # rotation route: treat each Hamilton path as a bin of m-1 edges and chop
    # it into requested pieces, first-fit-decreasing
    if m % 2 == 0:
        bins = [m - 1] * (m // 2)
        assign: list[list[int]] = [[] for _ in bins]
        order0 = sorted(range(len(lengths)), key=lambda i: -lengths[i])
        fits = True
        for idx in order0:
            placed_in = next(
                (bi for bi in range(len(bins)) if bins[bi] >= lengths[idx]), None
            )
            if placed_in is None:
                fits = False
                break
            bins[placed_in] -= lengths[idx]
            assign[placed_in].append(idx)
        if fits:
            hams = ks_rotation_paths(m)
            out_map: dict[int, Path] = {}
            for bi, idxs in enumerate(assign):
                pos = 0
                for idx in idxs:
                    L = lengths[idx]
                    out_map[idx] = tuple(hams[bi][pos : pos + L + 1])
                    pos += L
            return [out_map[i] for i in range(len(lengths))]

    # greedy walk with rotation repair on the residual of K_m
    rng = random.Random(f"pack:{seed}")
    residual = MutGraph(m)
    for i in range(m):
        for j in range(i + 1, m):
            residual.add_edge(i, j)
    budget = repair_budget if repair_budget is not None else 200 * m
    out = []
    order = sorted(range(len(lengths)), key=lambda i: -lengths[i])
    placed: dict[int, Path] = {}
    for idx in order:
        L = lengths[idx]
        start = max(range(m), key=lambda v: (residual.degree(v), -v))
        path = [start]
        pset = {start}

        def step_choices(v: int) -> list[int]:
            return sorted(
                (w for w in residual.adj[v] if w not in pset),
                key=lambda w: (-residual.degree(w), w),
            )

        local_budget = budget
        while len(path) - 1 < L:
            choices = step_choices(path[-1])
            if choices:
                w = choices[0]
                residual.remove_edge(path[-1], w)
                path.append(w)
                pset.add(w)
                continue
            # rotation repair: pivot on a residual edge from the end into the path
            local_budget -= 1
            if local_budget <= 0:
                raise PackingError(
                    f"packing failed for length {L} after repair budget"
                )
            end = path[-1]
            pivots = [
                i
                for i in range(len(path) - 2)
                if path[i] in residual.adj[end]
            ]
            if not pivots:
                raise PackingError(f"dead end with no rotation pivot (length {L})")
            i = pivots[rng.randrange(len(pivots))]
            # release (path[i], path[i+1]), reserve (path[i], end)
            residual.add_edge(path[i], path[i + 1])
            residual.remove_edge(path[i], end)
            path = path[: i + 1] + path[i + 1 :][::-1]
        placed[idx] = tuple(path)
    return [placed[i] for i in range(len(lengths))]


# ---------------------------------------------------------------------------
# sized forests inside a dense spot


@dataclass(frozen=True)
class SizedForestRequest:
    sizes: tuple[int, ...]
    budget: float

    def __post_init__(self):
        if sum(self.sizes) > self.budget:
            raise PreconditionError(
                f"requested {sum(self.sizes)} vertices exceeds budget {self.budget:.0f}"
            )
        if any(s < 2 for s in self.sizes):
            raise PreconditionError("forest sizes must be >= 2")


def _balanced_partition(
    g: Graph, s: int, seed: int, eta: float, d0: float, max_rounds: int = 60
) -> list[list[int]]:
    """Random balanced partition into s classes, resampled until every vertex
    has (1 +- eta) d0/s neighbours in every class (eta is a desk-scale knob)."""
    n = g.n
    lo = (1 - eta) * d0 / s
    hi = (1 + eta) * d0 / s

    def sample(rng: random.Random) -> list[int]:
        order = list(range(n))
        rng.shuffle(order)
        assign = [0] * n
        for pos, v in enumerate(order):
            assign[v] = pos % s
        return assign

    def degree_bad(assign: list[int]) -> bool:
        counts = [0] * s
        for v in range(n):
            for c in range(s):
                counts[c] = 0
            for w in g.neighbors(v):
                counts[assign[w]] += 1
            for c in range(s):
                if not lo <= counts[c] <= hi:
                    return True
        return False

    res = run_until_good(
        FunctionSampler(sample),
        [BadEvent("class-degrees", degree_bad)],
        ResamplePolicy(max_rounds=max_rounds, seed=seed),
        "class-partition",
    )
    assign = res.structure  # engine returns the best attempt even on timeout
    classes: list[list[int]] = [[] for _ in range(s)]
    for v in range(n):
        classes[assign[v]].append(v)
    return classes


def _assemble_fragments(classes_path: list[list[int]], maps: list[dict[int, int]]) -> list[Path]:
    """Fragments of the union of chained matchings.

    classes_path[j] is the vertex list of the j-th class along the K_s path;
    maps[j] sends a vertex of class j to its partner in class j+1.
    """
    incoming: list[set[int]] = [set() for _ in classes_path]
    for j, mp in enumerate(maps):
        incoming[j + 1].update(mp.values())
    fragments: list[Path] = []
    for j, cls in enumerate(classes_path):
        for v in sorted(cls):
            if v in incoming[j]:
                continue
            # fragment starts at (j, v); walk forward
            frag = [v]
            pos = j
            cur = v
            while pos < len(maps) and cur in maps[pos]:
                cur = maps[pos][cur]
                frag.append(cur)
                pos += 1
            if len(frag) >= 1:
                fragments.append(tuple(frag))
    return [f for f in fragments if len(f) >= 2] + [
        f for f in fragments if len(f) == 1
    ]


def sized_forests(
    g: Graph,
    spec: DenseSpotSpec,
    request: SizedForestRequest,
    seed: int,
    s_classes: int | None = None,
    matching_slack: float = 0.05,
    partition_eta: float = 0.95,
    path_cap: int | None = None,
) -> list[PathForest]:
    """Edge-disjoint path forests with exactly the requested vertex counts,
    each with few paths, inside a dense graph.

    Partition the vertices into s classes, extract per-pair matchings by exact
    edge coloring, pack class-paths of the right vertex counts into K_s, and
    realize each as a chained union of matchings; trim leaves to exact sizes.
    """
    if not check_dense_spot(g, range(g.n), spec):
        raise PreconditionError("sized_forests input is not dense per spec")
    d = spec.d
    n = g.n
    cap = path_cap if path_cap is not None else max(4, math.ceil(d ** 0.9))
    if not request.sizes:
        return []
    if max(request.sizes) > n:
        raise PackingError(f"a request of {max(request.sizes)} exceeds |V| = {n}")

    s = s_classes if s_classes is not None else 2 * math.ceil(d ** 0.15)
    s = max(2, min(s, n // 2))
    d0 = g.min_degree()
    classes = _balanced_partition(g, s, seed, partition_eta, d0)
    nbar = min(len(c) for c in classes)

    # batch the requests to multiples of nbar
    batched: dict[int, list[int]] = {}
    for ridx, size in enumerate(request.sizes):
        i_cnt = max(2, math.ceil(size / nbar))
        if i_cnt > s:
            raise PackingError(
                f"request {size} needs {i_cnt} classes of {nbar}, have {s}"
            )
        batched.setdefault(i_cnt, []).append(ridx)

    d_prime = max(1, math.floor((1 - matching_slack) * d0 / s))
    ks_lengths: list[int] = []
    ks_owner: list[int] = []  # i_cnt per packed path
    for i_cnt, requests in sorted(batched.items()):
        paths_needed = math.ceil(len(requests) / d_prime)
        ks_lengths.extend([i_cnt - 1] * paths_needed)
        ks_owner.extend([i_cnt] * paths_needed)
    ks_paths = complete_path_packing(ks_lengths, s, seed)

    # color only the class pairs the packing uses
    used_pairs: set[tuple[int, int]] = set()
    for p in ks_paths:
        for a, b in zip(p, p[1:]):
            used_pairs.add((a, b) if a < b else (b, a))
    pair_matchings: dict[tuple[int, int], list[dict[int, int]]] = {}
    for a, b in sorted(used_pairs):
        colors = bipartite_edge_coloring(g, classes[a], classes[b])
        colors.sort(key=len, reverse=True)
        cls_b = set(classes[b])
        maps = []
        for cls_edges in colors[: d_prime + 2]:
            mp: dict[int, int] = {}
            for u, v in cls_edges:
                if u in cls_b:
                    u, v = v, u
                mp[u] = v
            maps.append(mp)
        pair_matchings[(a, b)] = maps

    # realize forests, largest batch first so big requests get big forests
    forests_by_batch: dict[int, list[PathForest]] = {i: [] for i in batched}
    for pi, p in enumerate(ks_paths):
        i_cnt = ks_owner[pi]
        need = len(batched[i_cnt]) - len(forests_by_batch[i_cnt]) * 0
        for kk in range(d_prime):
            maps = []
            ok = True
            for a, b in zip(p, p[1:]):
                key = (a, b) if a < b else (b, a)
                avail = pair_matchings[key]
                if kk >= len(avail):
                    ok = False
                    break
                mp = avail[kk]
                if a > b:  # orient along the path
                    mp = {v: u for u, v in mp.items()}
                maps.append(mp)
            if not ok:
                continue
            frags = _assemble_fragments([classes[c] for c in p], maps)
            forest = PathForest()
            for f in frags:
                if len(f) >= 2:
                    forest.add_path(f)
            if forest.num_edges() > 0:
                forests_by_batch[i_cnt].append(forest)

    # hand forests to requests and trim leaves to exact sizes
    out: list[PathForest | None] = [None] * len(request.sizes)
    for i_cnt, ridxs in sorted(batched.items(), reverse=True):
        pool = sorted(
            forests_by_batch[i_cnt],
            key=lambda f: -len(f.vertices()),
        )
        for ridx in ridxs:
            size = request.sizes[ridx]
            picked = None
            for cand in pool:
                if len(cand.vertices()) >= size:
                    picked = cand
                    break
            if picked is None:
                raise PackingError(
                    f"no forest with >= {size} vertices available "
                    f"(pool max {max((len(f.vertices()) for f in pool), default=0)})"
                )
            pool.remove(picked)
            _trim_forest_to(picked, size)
            if len(picked) > cap:
                _merge_or_drop_smallest(picked, cap)
            out[ridx] = picked
    result = [f for f in out if f is not None]
    # audits: exact sizes, path cap, edge-disjointness
    seen: set[Edge] = set()
    for ridx, f in enumerate(result):
        if len(f.vertices()) != request.sizes[ridx]:
            raise CertificateError(
                f"forest {ridx} has {len(f.vertices())} vertices, "
                f"requested {request.sizes[ridx]}"
            )
        if len(f) > cap:
            raise CertificateError(f"forest {ridx} has {len(f)} paths > cap {cap}")
        for e in f.edge_set():
            if e in seen:
                raise CertificateError(f"edge {e} in two forests")
            seen.add(e)
    return result


def _trim_forest_to(forest: PathForest, size: int) -> None:
    """Iteratively remove leaves (shortest paths first) to hit `size` exactly."""
    while len(forest.vertices()) > size:
        idx = min(range(len(forest.paths)), key=lambda i: (len(forest.paths[i]), i))
        p = forest.paths[idx]
        if len(p) == 1:
            forest.remove_path(idx)
        elif len(p) == 2:
            forest.replace_paths({idx}, [(p[0],)])
        else:
            forest.replace_paths({idx}, [p[:-1]])
    # drop stray singletons beyond what the size needs
    while True:
        singles = [i for i, p in enumerate(forest.paths) if len(p) == 1]
        if not singles or len(forest.vertices()) <= size:
            break
        forest.remove_path(singles[0])


def _merge_or_drop_smallest(forest: PathForest, cap: int) -> None:
    while len(forest) > cap:
        idx = min(range(len(forest.paths)), key=lambda i: (len(forest.paths[i]), i))
        forest.remove_path(idx)


def sized_forests_spread(
    g: Graph,
    spec: DenseSpotSpec,
    request: SizedForestRequest,
    seed: int,
    eps: float,
    endpoint_cap: int | None = None,
    **kwargs,
) -> list[PathForest]:
    """sized_forests with sizes in [n_i, (1+eps)n_i] and no vertex ending more
    than ~d^{19/20} paths across all forests (over-request, then delete
    endpoint-heavy leaves)."""
    cap19 = endpoint_cap if endpoint_cap is not None else max(4, math.ceil(spec.d ** 0.95))
    grown = tuple(min(g.n, math.ceil((1 + eps) * s)) for s in request.sizes)
    inner = SizedForestRequest(grown, request.budget * (1 + eps) + len(grown))
    forests = sized_forests(g, spec, inner, seed, **kwargs)
    counts: dict[int, int] = {}
    for fi, forest in enumerate(forests):
        target = request.sizes[fi]
        changed = True
        while changed:
            changed = False
            for idx, p in enumerate(list(forest.paths)):
                for end in (p[0], p[-1]):
                    if counts.get(end, 0) >= cap19 and len(forest.vertices()) > target:
                        if len(p) <= 2:
                            forest.remove_path(idx)
                        elif end == p[0]:
                            forest.replace_paths({idx}, [p[1:]])
                        else:
                            forest.replace_paths({idx}, [p[:-1]])
                        changed = True
                        break
                if changed:
                    break
        for p in forest.paths:
            counts[p[0]] = counts.get(p[0], 0) + 1
            counts[p[-1]] = counts.get(p[-1], 0) + 1
        if not (request.sizes[fi] <= len(forest.vertices()) <= grown[fi]):
            raise CertificateError(
                f"spread forest {fi} size {len(forest.vertices())} outside "
                f"[{request.sizes[fi]}, {grown[fi]}]"
            )
    if counts and max(counts.values()) > cap19:
        raise CertificateError("endpoint spread cap violated after trimming")
    return forests


# ---------------------------------------------------------------------------
# attached spots


@dataclass
class AttachedSpot:
    """A dense piece plus paths that each enter it at exactly one endpoint.

    `edges` is the piece's available (residual) edge set; attachment vertices
    live in `junk`.
    """

    vertices: set[int]
    edges: set[Edge]
    junk: set[int]
    attached: list[Path]
    d: int

    def validate(self, eps: float, endpoint_quota: int | None = None) -> None:
        quota = endpoint_quota if endpoint_quota is not None else math.ceil(
            math.sqrt(self.d)
        )
        if not self.junk <= self.vertices:
            raise PreconditionError("junk set leaves the spot")
        if len(self.junk) > max(1, eps * self.d / 4):
            raise PreconditionError(
                f"|J| = {len(self.junk)} exceeds eps*d/4 = {eps * self.d / 4:.1f}"
            )
        counts: dict[int, int] = {}
        for p in self.attached:
            inside = [v for v in p if v in self.vertices]
            if len(inside) != 1 or inside[0] not in (p[0], p[-1]):
                raise PreconditionError(
                    "attached path must meet the spot in exactly one endpoint"
                )
            if inside[0] not in self.junk:
                raise PreconditionError("attachment vertex must lie in junk")
            counts[inside[0]] = counts.get(inside[0], 0) + 1
        if counts and max(counts.values()) > quota:
            raise PreconditionError("attachment endpoint quota exceeded")

    def graph(self) -> Graph:
        n = max(self.vertices) + 1 if self.vertices else 0
        return Graph(n, self.edges)


@dataclass
class SpotParams:
    """Desk-scale knobs for decomposing one spot."""

    eps: float = 0.3
    K: float = 2.0
    lam: float = 0.01
    q: float = 0.05
    s_classes: int | None = None  # None = planned per spot
    w_size: int | None = None
    matching_slack: float = 0.05
    partition_eta: float = 0.95
    path_cap_exp: float = 0.9
    conn_quota_exp: float = 0.995
    cleanup: bool = True


@dataclass
class SpotPlan:
    s: int
    w_size: int
    nbar: int
    capacity: int  # forests of l_target vertices the layout can realize

    def __repr__(self) -> str:
        return (
            f"SpotPlan(s={self.s}, w={self.w_size}, nbar={self.nbar}, "
            f"cap={self.capacity})"
        )


def _layout_capacity(s: int, nbar: int, d_prime: int, l_target: int) -> int:
    """Forests of l_target vertices servable by chopping rotation paths."""
    if nbar < 1:
        return 0
    i_cnt = max(2, math.ceil(l_target / nbar))
    if i_cnt > s:
        return 0
    L = i_cnt - 1
    per_ham = (s - 1) // L
    return (s // 2) * per_ham * d_prime


def plan_spot_layout(n_avail: int, d0: int, l_target: int) -> SpotPlan:
    """Pick the class count and connector-set size for a spot.

    Scores (s, w) layouts by realizable coverage minus leaf-trim and
    within-class losses, preferring rotation-choppable shapes.
    """
    best: tuple[float, SpotPlan] | None = None
    for w in (1, 2, 3):
        n_work = n_avail - w
        if n_work < l_target + 1:
            continue
        for nbar_t in range(3, 11):
            s = round(n_work / nbar_t / 2) * 2
            if s < 4 or s > n_work // 2:
                continue
            nbar = n_work // s
            if nbar < 2:
                continue
            i_cnt = max(2, math.ceil(l_target / nbar))
            if i_cnt > s:
                continue
            span = i_cnt * nbar
            trim = max(0, span - (l_target + 1))
            d_prime = max(1, int(0.95 * (d0 - w) / s))
            capacity = _layout_capacity(s, nbar, d_prime, l_target)
            if capacity == 0:
                continue
            stranded = ((s - 1) % (i_cnt - 1)) * (s // 2) * d_prime * nbar / max(
                1, (s // 2) * ((s - 1) // (i_cnt - 1))
            )
            covered = capacity * l_target
            waste = capacity * trim + (n_work * n_work) / (2 * s) + stranded
            score = covered - 0.8 * waste
            plan = SpotPlan(s, w, nbar, capacity)
            if best is None or score > best[0]:
                best = (score, plan)
    if best is None:
        return SpotPlan(
            max(2, min(4, n_avail // 3)), 1, max(2, n_avail // 4), 1
        )
    return best[1]


def extract_full_paths(
    edges: set[Edge], l_target: int, seed: int = 0, tries_per_path: int = 400
) -> tuple[list[Path], set[Edge]]:
    """Greedy cleanup: pull exactly-l_target paths out of a leftover edge set
    with rotation repair; returns (paths, remaining edges)."""
    if not edges:
        return [], set()
    n = max(max(e) for e in edges) + 1
    residual = MutGraph.from_edges(n, edges)
    rng = random.Random(f"cleanup:{seed}")
    out: list[Path] = []
    while residual.edge_count() >= l_target:
        starts = sorted(
            (v for v in range(n) if residual.adj[v]),
            key=lambda v: (-residual.degree(v), v),
        )
        if not starts:
            break
        path = [starts[0]]
        pset = {starts[0]}
        removed: list[Edge] = []
        budget = tries_per_path
        ok = False
        while budget > 0:
            if len(path) - 1 == l_target:
                ok = True
                break
            cands = sorted(
                (w for w in residual.adj[path[-1]] if w not in pset),
                key=lambda w: (-residual.degree(w), w),
            )
            if cands:
                w = cands[0]
                residual.remove_edge(path[-1], w)
                removed.append(ekey(path[-1], w))
                path.append(w)
                pset.add(w)
                continue
            budget -= 1
            end = path[-1]
            pivots = [i for i in range(len(path) - 2) if path[i] in residual.adj[end]]
            if not pivots:
                break
            i = pivots[rng.randrange(len(pivots))]
            residual.add_edge(path[i], path[i + 1])
            removed.remove(ekey(path[i], path[i + 1]))
            residual.remove_edge(path[i], end)
            removed.append(ekey(path[i], end))
            path = path[: i + 1] + path[i + 1 :][::-1]
        if ok:
            out.append(tuple(path))
        else:
            for e in removed:
                residual.add_edge(*e)
            break
    remaining = set(residual.edges())
    return out, remaining


@dataclass
class SpotDecomposition:
    paths: list[Path]
    leftover: set[Edge]
    metrics: dict

    def to_json(self) -> dict:
        return {
            "paths": len(self.paths),
            "leftover_edges": len(self.leftover),
            "metrics": self.metrics,
        }


def decompose_spot_with_attached(
    spot: AttachedSpot,
    l_target: int,
    params: SpotParams,
    seed: int,
) -> SpotDecomposition:
    """Decompose a connected dense piece plus its attached paths into paths of
    exactly l_target edges, leaving a reported leftover.

    Pipeline: connector set W; per attached path a forest request with
    l_i + n_i = 0 mod l_target; padding with full-length requests up to the
    budget; sized forests on spot - J - W; join each forest and its attached
    path into one long path through direct edges and W-interior connectors,
    tuned so the length is a multiple of l_target; chop from the attached end.
    """
    d = spot.d
    spot.validate(params.eps)
    verts = sorted(spot.vertices)
    if l_target > len(verts):
        raise PreconditionError(
            f"l_target {l_target} exceeds |V(spot)| = {len(verts)}"
        )
    host_n = max(verts) + 1
    work = MutGraph.from_edges(host_n, spot.edges)

    core = sorted(spot.vertices - spot.junk)
    # connectivity and density preconditions
    sub_all = induced_subgraph(work.to_graph(), spot.vertices)
    cert = check_connectivity(
        sub_all.graph, ConnectivitySpec(params.lam ** 0.25, params.lam / 2, d)
    )
    if not cert.connected:
        raise PreconditionError("spot is not (lambda^(1/4), lambda/2, d)-connected")

    deg_core = {v: len(work.adj[v] & set(core)) for v in core}
    d0 = min(deg_core.values()) if deg_core else 0
    plan = plan_spot_layout(len(core), d0, l_target)
    s_cls = params.s_classes if params.s_classes is not None else plan.s
    w_want = params.w_size if params.w_size is not None else plan.w_size

    core_sub = induced_subgraph(work.to_graph(), core)
    wset_local = connector_set(
        core_sub.graph,
        ConnectivitySpec(min(0.5, d0 / (2 * d)), params.lam, d),
        K=params.K,
        q=params.q,
        eps=w_want / max(1, core_sub.graph.n),
        seed=seed,
        pair_count=20,
        target=1,
        max_rounds=30,
    )
    w_vertices = {core_sub.to_parent[v] for v in wset_local.vertices}

    inner = sorted(set(core) - w_vertices)
    inner_sub = induced_subgraph(work.to_graph(), inner)
    ig = inner_sub.graph
    d_in = ig.min_degree()

    # forest requests: one per attached path needing a remainder, plus padding
    requests: list[int] = []
    owners: list[int | None] = []  # attached index or None for padding
    direct_chops: list[int] = []  # attached paths divisible as they stand
    extend_walks: list[tuple[int, int]] = []  # (attached index, extra vertices)
    for ai, p in enumerate(spot.attached):
        li = len(p) - 1
        ni = (-li) % l_target
        if ni == 0:
            direct_chops.append(ai)
        elif ni <= max(3, plan.nbar):
            # too small to batch as a forest: extend the path into the spot
            # by ni extra vertices instead
            extend_walks.append((ai, ni))
        else:
            requests.append(ni)
            owners.append(ai)
    budget = (1 - params.eps / 4) * ig.n * max(d_in, 1) / 2
    s_eff = max(2, min(s_cls, ig.n // 2))
    nbar_eff = max(1, ig.n // s_eff)
    d_prime_eff = max(1, int((1 - params.matching_slack) * max(d_in, 1) / s_eff))
    capacity = _layout_capacity(s_eff, nbar_eff, d_prime_eff, l_target)
    while (
        sum(requests) + l_target <= budget
        and len(requests) < capacity
        and ig.n >= l_target + 1
    ):
        requests.append(l_target)
        owners.append(None)

    forests: list[PathForest] = []
    if requests:
        spot_spec = DenseSpotSpec(
            min(0.95, max(0.0, 1 - d_in / d) + 1e-6), d, max(params.K, ig.n / d + 1)
        )
        req = SizedForestRequest(tuple(requests), budget + sum(requests))
        try:
            local_forests = sized_forests(
                ig,
                spot_spec,
                req,
                seed,
                s_classes=min(s_cls, ig.n // 2),
                matching_slack=params.matching_slack,
                partition_eta=params.partition_eta,
                path_cap=max(4, math.ceil(d ** params.path_cap_exp)),
            )
        except PackingError:
            # halve the padding and retry once before giving up
            keep = [i for i, o in enumerate(owners) if o is not None]
            pad = [i for i, o in enumerate(owners) if o is None]
            pad = pad[: len(pad) // 2]
            sel = sorted(keep + pad)
            requests = [requests[i] for i in sel]
            owners = [owners[i] for i in sel]
            req = SizedForestRequest(tuple(requests), budget + sum(requests))
            local_forests = sized_forests(
                ig,
                spot_spec,
                req,
                seed + 1,
                s_classes=min(s_cls, ig.n // 2),
                matching_slack=params.matching_slack,
                partition_eta=params.partition_eta,
                path_cap=max(4, math.ceil(d ** params.path_cap_exp)),
            )
        for f in local_forests:
            lifted = PathForest()
            for p in f.paths:
                lifted.add_path(inner_sub.lift_path(p))
            forests.append(lifted)

    # mark forest and attached edges as used; the rest of the spot is free
    used: set[Edge] = set()
    for f in forests:
        used |= f.edge_set()

    conn_quota = max(4, int(2 * d ** params.conn_quota_exp))
    conn_load: dict[int, int] = {}
    out_paths: list[Path] = []
    covered: set[Edge] = set()

    def edge_free(a: int, b: int) -> bool:
        return work.has_edge(a, b) and ekey(a, b) not in used and ekey(a, b) not in covered

    def w_route(a: int, b: int, banned: set[int]) -> Path | None:
        # shortest a->b path with interior in W minus banned, on free edges
        limit = max(3, math.floor(2 / params.q))
        prev = {a: -1}
        frontier = [a]
        depth = 0
        while frontier and depth < limit:
            nxt = []
            for v in frontier:
                for w in sorted(work.adj[v]):
                    if w in prev:
                        continue
                    if not edge_free(v, w):
                        continue
                    if conn_load.get(w, 0) >= conn_quota:
                        continue
                    if w == b:
                        prev[w] = v
                        chain = [w]
                        while prev[chain[-1]] != -1:
                            chain.append(prev[chain[-1]])
                        return tuple(reversed(chain))
                    if w in w_vertices and w not in banned:
                        prev[w] = v
                        nxt.append(w)
            frontier = nxt
            depth += 1
        return None

    def join_forest(forest: PathForest, attached: Path | None, seed_j: int) -> tuple[Path | None, list[Path]]:
        """One super-path from the forest's fragments plus the attached path.

        Returns (joined path or None, unused fragments)."""
        frags = sorted(forest.paths, key=lambda p: (-len(p), p))
        if attached is not None:
            entry = attached[-1] if attached[-1] in spot.vertices else attached[0]
            chain = list(attached if attached[-1] == entry else attached[::-1])
        elif frags:
            chain = list(frags.pop(0))
        else:
            return None, []
        cset = set(chain)
        connectors: list[tuple[int, Path]] = []  # (position kind) log
        w_used: set[int] = set()
        unused: list[Path] = []
        while frags:
            end = chain[-1]
            picked = None
            for fi, frag in enumerate(frags):
                for orient in (frag, frag[::-1]):
                    if orient[0] in cset:
                        continue
                    if edge_free(end, orient[0]) and not (set(orient) & cset):
                        picked = (fi, orient, (end, orient[0]))
                        break
                if picked:
                    break
            if picked is None:
                for fi, frag in enumerate(frags):
                    for orient in (frag, frag[::-1]):
                        if set(orient) & cset:
                            continue
                        route = w_route(end, orient[0], w_used | cset)
                        if route is not None and not (set(route[1:-1]) & set(orient)):
                            picked = (fi, orient, route)
                            break
                    if picked:
                        break
                if picked is None:
                    break
                fi, orient, route = picked
                for a, b in zip(route, route[1:]):
                    covered.add(ekey(a, b))
                for wv in route[1:-1]:
                    w_used.add(wv)
                    conn_load[wv] = conn_load.get(wv, 0) + 2
                chain.extend(route[1:-1])
                chain.extend(orient)
                cset.update(route[1:-1])
                cset.update(orient)
                connectors.append((1, route))
                frags.pop(fi)
                continue
            fi, orient, edge_or_route = picked
            covered.add(ekey(end, orient[0]))
            chain.extend(orient)
            cset.update(orient)
            connectors.append((0, (end, orient[0])))
            frags.pop(fi)
        # tune total length to a multiple of l_target by upgrading direct
        # connections to W-routes (each upgrade adds exactly one edge)
        length = len(chain) - 1
        deficit = (-length) % l_target
        if deficit:
            direct_log = [c for c in connectors if c[0] == 0]
            upgrades = 0
            for _, (a, b) in direct_log:
                if upgrades == deficit:
                    break
                ci = chain.index(b) if chain.index(a) + 1 == chain.index(b) else -1
                if ci <= 0:
                    continue
                route = w_route(a, b, w_used | set(chain))
                if route is not None and len(route) == 3:
                    wv = route[1]
                    covered.discard(ekey(a, b))
                    covered.add(ekey(a, wv))
                    covered.add(ekey(wv, b))
                    conn_load[wv] = conn_load.get(wv, 0) + 2
                    w_used.add(wv)
                    chain.insert(ci, wv)
                    upgrades += 1
        return tuple(chain), unused + frags

    fi = 0
    for ridx, owner in enumerate(owners):
        forest = forests[fi] if fi < len(forests) else PathForest()
        fi += 1
        attached = spot.attached[owner] if owner is not None else None
        joined, stray = join_forest(forest, attached, seed + ridx)
        if joined is None:
            continue
        for a, b in zip(joined, joined[1:]):
            covered.add(ekey(a, b))
        pieces, tail = chop_path(joined, l_target, from_start=True)
        out_paths.extend(pieces)
        covered.difference_update(tail)
        for p_ in stray:
            covered.difference_update(path_edges(p_))
    for ai in direct_chops:
        p = spot.attached[ai]
        pieces, tail = chop_path(p, l_target, from_start=False)
        out_paths.extend(pieces)

    for ai, extra in extend_walks:
        p = spot.attached[ai]
        entry = p[-1] if p[-1] in spot.vertices else p[0]
        chain = list(p if p[-1] == entry else p[::-1])
        cset = set(chain)
        cur = entry
        for _ in range(extra):
            cands = sorted(
                (
                    w
                    for w in work.adj[cur]
                    if w not in cset and edge_free(cur, w)
                ),
                key=lambda w: (-len(work.adj[w]), w),
            )
            if not cands:
                break
            nxt = cands[0]
            covered.add(ekey(cur, nxt))
            chain.append(nxt)
            cset.add(nxt)
            cur = nxt
        pieces, tail = chop_path(tuple(chain), l_target, from_start=True)
        out_paths.extend(pieces)
        covered.difference_update(tail)

    # leftover accounting, then the cleanup pass
    attached_edges: set[Edge] = set()
    for p in spot.attached:
        attached_edges |= set(path_edges(p))
    all_input = set(spot.edges) | attached_edges
    used_by_output: set[Edge] = set()
    for p in out_paths:
        used_by_output |= set(path_edges(p))
    leftover = all_input - used_by_output
    base_paths = len(out_paths)
    if params.cleanup:
        spot_leftover = leftover & set(spot.edges)
        extra, rest = extract_full_paths(spot_leftover, l_target, seed)
        out_paths.extend(extra)
        leftover = (leftover - spot_leftover) | rest

    # conservation audit
    used_by_output = set()
    for p in out_paths:
        for e in path_edges(p):
            if e in used_by_output:
                raise CertificateError(f"edge {e} reused across output paths")
            used_by_output.add(e)
    if used_by_output | leftover != all_input or used_by_output & leftover:
        raise CertificateError("edge conservation failed in spot decomposition")
    for p in out_paths:
        if len(p) - 1 != l_target:
            raise CertificateError(f"output path of length {len(p) - 1} != {l_target}")

    metrics = {
        "paths_from_construction": base_paths,
        "paths_from_cleanup": len(out_paths) - base_paths,
        "leftover": len(leftover),
        "leftover_budget": params.eps * len(spot.vertices) * d,
        "plan": repr(plan),
        "w_size": len(w_vertices),
        "connected_cert": cert.connected,
    }
    return SpotDecomposition(out_paths, leftover, metrics)


# ---------------------------------------------------------------------------
# the family loop


@dataclass
class FamilyDecomposition:
    paths: list[Path]
    leftover: set[Edge]
    metrics: dict

    def to_json(self) -> dict:
        return {
            "paths": len(self.paths),
            "leftover_edges": len(self.leftover),
            "metrics": self.metrics,
        }


def decompose_dense_family(
    g: Graph,
    spots: list[tuple[int, ...]],
    x_sets: list[set[int]],
    forests: list[PathForest],
    l_target: int,
    d: int,
    params: SpotParams,
    seed: int,
    p_sample: float | None = None,
    eta_band: float | None = None,
) -> FamilyDecomposition:
    """Decompose the dense spots together with the path forests attached to
    them into exactly-l_target paths, spot by spot (largest first).

    Preconditions B1-B3 (X_i containment, sqrt(d) endpoint quotas) are
    audited; band checks warn and widen rather than fail, per the recorded
    open-question policy.
    """
    import warnings as _w

    quota = math.ceil(math.sqrt(d))
    spot_vertex = {v: i for i, s in enumerate(spots) for v in s}
    all_spot_vertices = set(spot_vertex)

    # B1: containment; endpoint quotas B2/B3
    end_counts: dict[int, int] = {}
    spot_forest_counts: dict[tuple[int, int], int] = {}
    for fi, forest in enumerate(forests):
        for pth in forest.paths:
            inside = [v for v in pth if v in all_spot_vertices]
            for v in (pth[0], pth[-1]):
                if v in all_spot_vertices:
                    si = spot_vertex[v]
                    if v not in x_sets[si]:
                        raise PreconditionError(
                            f"forest endpoint {v} in spot {si} but not in X_{si}"
                        )
                    end_counts[v] = end_counts.get(v, 0) + 1
                    spot_forest_counts[(si, fi)] = (
                        spot_forest_counts.get((si, fi), 0) + 1
                    )
            for v in inside:
                if v not in (pth[0], pth[-1]):
                    raise PreconditionError(
                        f"forest path passes through spot vertex {v}"
                    )
    if end_counts and max(end_counts.values()) > quota:
        _w.warn("B2 endpoint quota exceeded; continuing with a wider quota")
    if spot_forest_counts and max(spot_forest_counts.values()) > quota:
        _w.warn("B3 per-spot-per-forest quota exceeded; continuing")
    if p_sample is not None and eta_band is not None:
        for si, s in enumerate(spots):
            lo = (1 - eta_band) * p_sample * d
            hi = (1 + eta_band) * p_sample * d
            for v in s:
                cnt = sum(1 for w in g.neighbors(v) if w in x_sets[si])
                if not lo <= cnt <= hi:
                    _w.warn(
                        f"B1 band miss at spot {si}: d(v, X_i) = {cnt} not in "
                        f"[{lo:.1f}, {hi:.1f}]; widening"
                    )
                    break

    live: list[tuple[int, Path]] = []  # (forest index, path)
    for fi, forest in enumerate(forests):
        for pth in forest.paths:
            live.append((fi, pth))

    used: set[Edge] = set()
    out_paths: list[Path] = []
    leftover: set[Edge] = set()
    spot_metrics: list[dict] = []

    order = sorted(range(len(spots)), key=lambda i: (-len(spots[i]), i))
    for si in order:
        s_verts = set(spots[si])
        x_h = set(x_sets[si]) & s_verts
        core = s_verts - x_h
        spot_edges = {
            ekey(u, v)
            for u in s_verts
            for v in g.neighbors(u)
            if v in s_verts and u < v
        }
        internal_unused = {e for e in spot_edges if e not in used}

        core_sub = induced_subgraph(g, core)
        deg_min = core_sub.graph.min_degree() if core_sub.graph.n else 0
        beta_actual = max(1e-6, 1 - deg_min / d)
        pieces: list[set[int]] = []
        junk_part: set[int] = set()
        deleted: list[Edge] = []
        if core:
            if beta_actual <= 0.25:
                try:
                    part = partition_connected(
                        core_sub.graph, beta_actual, d, params.K, params.lam
                    )
                    pieces = [
                        {core_sub.to_parent[v] for v in p} for p in part.pieces
                    ]
                    junk_part = {core_sub.to_parent[v] for v in part.junk}
                    deleted = [core_sub.lift_edge(e) for e in part.deleted_edges]
                except (PartitionError, PreconditionError):
                    pieces = [set(core)]
            else:
                pieces = [set(core)]
        for e in deleted:
            used.add(e)
            leftover.add(e)

        # attach X_H vertices to the piece they see most
        x_to_piece: dict[int, int] = {}
        for xv in sorted(x_h):
            best_pi, best_cnt = None, -1
            for pi, piece in enumerate(pieces):
                cnt = sum(1 for w in g.neighbors(xv) if w in piece)
                if cnt > best_cnt:
                    best_pi, best_cnt = pi, cnt
            if best_pi is not None and best_cnt > 0:
                x_to_piece[xv] = best_pi

        for pi, piece in enumerate(pieces):
            piece_x = {xv for xv, p_ in x_to_piece.items() if p_ == pi}
            # pair up live path endpoints sitting in this piece's X share
            by_forest: dict[int, list[int]] = {}
            for li, item in enumerate(live):
                if item is None:
                    continue
                fi, pth = item
                for v in (pth[0], pth[-1]):
                    if v in piece_x:
                        by_forest.setdefault(fi, []).append(li)
            route_load: dict[int, int] = {}
            route_quota = max(4, int(2 * d ** 0.75))

            def piece_route(a: int, b: int) -> Path | None:
                """a and b in X_H; route a->...->b with interior in the piece."""
                limit = max(4, math.floor(2 / params.q))
                prev = {a: -1}
                frontier = [a]
                depth = 0
                while frontier and depth < limit:
                    nxt = []
                    for v in frontier:
                        for w in sorted(g.neighbors(v)):
                            if w in prev or ekey(v, w) in used:
                                continue
                            if w == b and v != a:
                                prev[w] = v
                                chain = [w]
                                while prev[chain[-1]] != -1:
                                    chain.append(prev[chain[-1]])
                                return tuple(reversed(chain))
                            if w in piece and route_load.get(w, 0) < route_quota:
                                prev[w] = v
                                nxt.append(w)
                    frontier = nxt
                    depth += 1
                return None

            attached: list[Path] = []
            junk_piece = set(junk_part & piece)
            for fi, lis in sorted(by_forest.items()):
                # greedy pairing of distinct live paths
                unpaired = sorted(set(lis))
                while len(unpaired) >= 2:
                    la = unpaired.pop(0)
                    partner = None
                    for lb in unpaired:
                        if lb != la and live[lb] is not None and live[la] is not None:
                            partner = lb
                            break
                    if partner is None:
                        break
                    unpaired.remove(partner)
                    fa, pa = live[la]
                    fb, pb = live[partner]
                    ea = pa[0] if pa[0] in piece_x else pa[-1]
                    eb = pb[0] if pb[0] in piece_x else pb[-1]
                    route = piece_route(ea, eb)
                    if route is None:
                        continue
                    for a, b in zip(route, route[1:]):
                        used.add(ekey(a, b))
                    for v in route[1:-1]:
                        route_load[v] = route_load.get(v, 0) + 2
                    try:
                        merged = join_paths(pa, pb, route)
                    except Exception:
                        continue
                    live[la] = (fa, merged)
                    live[partner] = None  # type: ignore[assignment]
                live_left = [
                    li
                    for li in set(lis)
                    if live[li] is not None
                    and (
                        live[li][1][0] in piece_x or live[li][1][-1] in piece_x
                    )
                ]
                # at most one leftover endpoint per forest enters the piece
                for li in live_left[:1]:
                    fi2, pth = live[li]
                    xv = pth[0] if pth[0] in piece_x else pth[-1]
                    entries = [
                        u
                        for u in sorted(g.neighbors(xv))
                        if u in piece and ekey(xv, u) not in used
                    ]
                    if not entries or len(junk_piece) + 1 > max(
                        1, params.eps * d / 4
                    ):
                        continue
                    u = entries[0]
                    used.add(ekey(xv, u))
                    oriented = pth if pth[-1] == xv else pth[::-1]
                    attached.append(oriented + (u,))
                    junk_piece.add(u)
                    live[li] = None  # type: ignore[assignment]

            piece_edges = {
                ekey(u, v)
                for u in piece
                for v in g.neighbors(u)
                if v in piece and u < v and ekey(u, v) not in used
            }
            spot_obj = AttachedSpot(set(piece), piece_edges, junk_piece, attached, d)
            try:
                spot_obj.validate(params.eps)
                dec = decompose_spot_with_attached(spot_obj, l_target, params, seed + si)
            except (PreconditionError, PackingError, CertificateError) as exc:
                # salvage by direct extraction
                extra, rest = extract_full_paths(piece_edges, l_target, seed + si)
                out_paths.extend(extra)
                leftover |= rest
                for pth in attached:
                    pieces_, tail = chop_path(pth, l_target, from_start=False)
                    out_paths.extend(pieces_)
                    leftover |= tail
                used |= piece_edges
                spot_metrics.append({"spot": si, "piece": pi, "salvage": str(exc)})
                continue
            out_paths.extend(dec.paths)
            leftover |= dec.leftover
            used |= piece_edges
            for pth in attached:
                used |= set(path_edges(pth))
            spot_metrics.append({"spot": si, "piece": pi, **dec.metrics})

        # everything of the spot not consumed by pieces goes to leftover
        for e in internal_unused:
            if e not in used:
                leftover.add(e)
                used.add(e)

    # chop remaining live paths (ends in unprocessed or unreachable X parts)
    for item in live:
        if item is None:
            continue
        fi, pth = item
        pieces_, tail = chop_path(pth, l_target, from_start=True)
        out_paths.extend(pieces_)
        leftover |= tail

    if params.cleanup and leftover:
        extra, rest = extract_full_paths(leftover, l_target, seed + 7777)
        out_paths.extend(extra)
        leftover = rest

    # conservation audit over spots + forests
    input_edges: set[Edge] = set()
    for s in spots:
        sv = set(s)
        for u in sv:
            for v in g.neighbors(u):
                if v in sv and v > u:
                    input_edges.add((u, v))
    for forest in forests:
        input_edges |= forest.edge_set()
    out_used: set[Edge] = set()
    for pth in out_paths:
        for e in path_edges(pth):
            if e in out_used:
                raise CertificateError(f"edge {e} reused in family output")
            out_used.add(e)
    if out_used | leftover != input_edges:
        diff = (out_used | leftover) ^ input_edges
        raise CertificateError(
            f"family edge conservation failed on {len(diff)} edges"
        )
    for pth in out_paths:
        if len(pth) - 1 != l_target:
            raise CertificateError("family output path has wrong length")
    metrics = {
        "spots": spot_metrics,
        "total_input_edges": len(input_edges),
        "covered": len(out_used),
        "leftover": len(leftover),
    }
    return FamilyDecomposition(out_paths, leftover, metrics)
