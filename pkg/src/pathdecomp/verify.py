"""Independent verifiers: every other module is checked against these.

The verifiers never trust construction bookkeeping; they recompute everything
from the host graph and the claimed output.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import PathdecompError
from .forests import Path, PathForest, path_edges
from .graph import Edge, Graph


@dataclass(frozen=True)
class BoundednessSpec:
    """(m, Delta0, Delta1) bounds for a collection of path forests."""

    m: int
    delta0: int
    delta1: int

    def __post_init__(self):
        if min(self.m, self.delta0, self.delta1) < 0:
            raise PathdecompError(f"negative boundedness parameter: {self}")


@dataclass(frozen=True)
class DenseSpotSpec:
    """(eta, d, K): at most K*d vertices, min internal degree >= (1-eta)*d."""

    eta: float
    d: int
    K: float

    def __post_init__(self):
        if not (0 <= self.eta < 1):
            raise PathdecompError(f"eta must be in [0,1), got {self.eta}")
        if self.K < 1:
            raise PathdecompError(f"K must be >= 1, got {self.K}")
        if self.d < 1:
            raise PathdecompError(f"d must be >= 1, got {self.d}")


@dataclass
class PathCheckReport:
    valid: bool
    reused_edges: list[Edge]
    nonedges: list[Edge]
    nonsimple: list[int]  # indices of paths that are not simple paths
    lengths: dict[int, int]  # length -> count
    edges_covered: int

    def to_json(self) -> dict:
        return {
            "valid": self.valid,
            "reused_edges": [list(e) for e in self.reused_edges],
            "nonedges": [list(e) for e in self.nonedges],
            "nonsimple": self.nonsimple,
            "lengths": {str(k): v for k, v in sorted(self.lengths.items())},
            "edges_covered": self.edges_covered,
        }


def verify_edge_disjoint_paths(g: Graph, paths: Sequence[Path]) -> PathCheckReport:
    """Valid iff every path is a simple path of g and no edge is used twice."""
    reused: list[Edge] = []
    nonedges: list[Edge] = []
    nonsimple: list[int] = []
    seen: set[Edge] = set()
    lengths: Counter[int] = Counter()
    covered = 0
    for idx, p in enumerate(paths):
        lengths[len(p) - 1] += 1
        if len(p) == 0 or len(set(p)) != len(p) or any(
            not (0 <= v < g.n) for v in p
        ):
            nonsimple.append(idx)
            continue
        for e in path_edges(p):
            if not g.has_edge(*e):
                nonedges.append(e)
                continue
            if e in seen:
                reused.append(e)
            else:
                seen.add(e)
                covered += 1
    valid = not reused and not nonedges and not nonsimple
    return PathCheckReport(valid, reused, nonedges, nonsimple, dict(lengths), covered)


@dataclass
class BoundednessReport:
    ok: bool
    violations: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"ok": self.ok, "violations": list(self.violations)}


def check_bounded(
    forests: Sequence[PathForest], spec: BoundednessSpec, host: Graph
) -> BoundednessReport:
    """Audit an (m, Delta0, Delta1) claim over a collection of forests.

    m caps each forest's path count; Delta0 caps each vertex's total endpoint
    multiplicity; Delta1 caps, per forest, any vertex's neighbor count among
    that forest's endpoints.
    """
    violations: list[str] = []
    total_ends: Counter[int] = Counter()
    for i, forest in enumerate(forests):
        if len(forest) > spec.m:
            violations.append(f"forest {i} has {len(forest)} paths > m={spec.m}")
        ends = set(forest.endpoints())
        total_ends.update(forest.endpoints())
        for v in range(host.n):
            cnt = sum(1 for w in host.neighbors(v) if w in ends)
            if cnt > spec.delta1:
                violations.append(
                    f"vertex {v} has {cnt} neighbors among forest {i} endpoints"
                    f" > Delta1={spec.delta1}"
                )
    for v, cnt in sorted(total_ends.items()):
        if cnt > spec.delta0:
            violations.append(
                f"vertex {v} ends {cnt} paths in total > Delta0={spec.delta0}"
            )
    return BoundednessReport(not violations, violations)


def check_dense_spot(g: Graph, spot: Iterable[int], spec: DenseSpotSpec) -> bool:
    """True iff 0 < |U| <= K*d and every vertex of U has >= (1-eta)*d
    neighbors inside U."""
    u = set(spot)
    if not u or len(u) > spec.K * spec.d:
        return False
    need = (1 - spec.eta) * spec.d
    for v in u:
        if sum(1 for w in g.neighbors(v) if w in u) < need:
            return False
    return True
