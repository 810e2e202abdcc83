"""Approximate path decompositions and vertex path covers of near-regular
graphs, with independent verifiers and brute-force oracles."""

from .config import PipelineConfig
from .errors import (
    BudgetError,
    CertificateError,
    GenerationError,
    PackingError,
    ParseError,
    PartitionError,
    PathdecompError,
    PreconditionError,
)
from .forests import Path, PathForest, load_paths, save_paths
from .graph import (
    Graph,
    Subgraph,
    gen_clique_bridge,
    gen_clique_union,
    gen_complete,
    gen_complete_bipartite,
    gen_cycle,
    gen_random_regular,
    load_graph,
    save_graph,
)
from .pipeline import (
    CoverReport,
    DecompositionReport,
    approx_decompose,
    bench,
    cover,
)
from .verify import (
    BoundednessSpec,
    DenseSpotSpec,
    check_bounded,
    check_dense_spot,
    verify_edge_disjoint_paths,
)

__version__ = "0.1.0"

__all__ = [
    "PipelineConfig",
    "Graph",
    "Subgraph",
    "Path",
    "PathForest",
    "approx_decompose",
    "cover",
    "bench",
    "DecompositionReport",
    "CoverReport",
    "verify_edge_disjoint_paths",
    "check_bounded",
    "check_dense_spot",
    "BoundednessSpec",
    "DenseSpotSpec",
    "load_graph",
    "save_graph",
    "load_paths",
    "save_paths",
    "gen_random_regular",
    "gen_clique_union",
    "gen_clique_bridge",
    "gen_complete",
    "gen_complete_bipartite",
    "gen_cycle",
    "PathdecompError",
    "ParseError",
    "GenerationError",
    "PreconditionError",
    "BudgetError",
    "PackingError",
    "CertificateError",
    "PartitionError",
]
