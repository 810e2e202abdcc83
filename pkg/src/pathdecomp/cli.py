"""Command-line interface: generate, decompose, cover, verify, oracle, bench.

All subcommands take --seed, --config <file> (flat key=value), and --out.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path as FilePath

from .config import PipelineConfig
from .errors import PathdecompError
from .forests import load_paths, save_paths
from .graph import (
    Graph,
    gen_clique_bridge,
    gen_clique_union,
    gen_complete,
    gen_complete_bipartite,
    gen_cycle,
    gen_random_regular,
    load_graph,
    save_graph,
)
from .oracle import OracleBudget, exact_min_path_cover, exact_path_decomposition, kotzig_check
from .pipeline import approx_decompose, bench, bench_rows_to_csv, cover
from .verify import verify_edge_disjoint_paths


def _load_config(path: str | None) -> PipelineConfig:
    return PipelineConfig.from_file(path) if path else PipelineConfig()


def _write_out(payload: str, out: str | None) -> None:
    if out:
        FilePath(out).write_text(payload, encoding="utf-8")
    else:
        sys.stdout.write(payload)


def _infer_degree(g: Graph, d_arg: int | None) -> int:
    if d_arg is not None:
        return d_arg
    degs = set(g.degrees())
    if len(degs) != 1:
        raise PathdecompError(
            "graph is not regular; pass --d explicitly"
        )
    return degs.pop()


def cmd_generate(args) -> int:
    if args.type == "regular":
        g = gen_random_regular(args.n, args.d, seed=args.seed)
    elif args.type == "cliques":
        g = gen_clique_union(args.copies, args.size)
    elif args.type == "cycle":
        g = gen_cycle(args.n)
    elif args.type == "complete":
        g = gen_complete(args.n)
    elif args.type == "bipartite":
        g = gen_complete_bipartite(args.n, args.n2 or args.n)
    elif args.type == "bridge":
        g = gen_clique_bridge(args.size, args.bridges)
    else:
        raise PathdecompError(f"unknown graph type {args.type!r}")
    if args.out:
        save_graph(g, args.out)
        print(f"wrote {g.n} vertices, {g.m} edges to {args.out}")
    else:
        save_graph(g, "/dev/stdout")
    return 0


def cmd_decompose(args) -> int:
    g = load_graph(args.graph)
    d = _infer_degree(g, args.d)
    cfg = _load_config(args.config)
    rep = approx_decompose(g, d, cfg, seed=args.seed)
    payload = json.dumps(rep.to_json(), indent=1, sort_keys=True) + "\n"
    _write_out(payload, args.out)
    if args.paths_out:
        save_paths(rep.paths, args.paths_out)
    if args.out:
        print(
            f"decomposed: {len(rep.paths)} paths of length {rep.l_target}, "
            f"leftover fraction {rep.leftover_fraction:.4f}"
        )
    return 0


def cmd_cover(args) -> int:
    g = load_graph(args.graph)
    d = _infer_degree(g, args.d)
    cfg = _load_config(args.config)
    rep = cover(g, d, cfg, seed=args.seed)
    payload = json.dumps(rep.to_json(), indent=1, sort_keys=True) + "\n"
    _write_out(payload, args.out)
    if args.out:
        print(
            f"cover: {len(rep.result.paths)} paths "
            f"(quota {g.n // (d + 1)}), uncovered {rep.result.uncovered}"
        )
    return 0


def cmd_verify(args) -> int:
    g = load_graph(args.graph)
    paths = load_paths(args.paths)
    report = verify_edge_disjoint_paths(g, paths)
    payload = json.dumps(report.to_json(), indent=1, sort_keys=True) + "\n"
    _write_out(payload, args.out)
    return 0 if report.valid else 1


def cmd_oracle(args) -> int:
    g = load_graph(args.graph)
    budget = OracleBudget(
        max_vertices=args.max_vertices,
        max_edges=args.max_edges,
        time_limit=args.time_limit,
    )
    if args.question == "min-path-cover":
        result: dict = {"min_path_cover": exact_min_path_cover(g, budget)}
    elif args.question == "p-decomposition":
        if args.length is None:
            raise PathdecompError("--length required for p-decomposition")
        result = {
            "length": args.length,
            "decomposes": exact_path_decomposition(g, args.length, budget),
        }
    elif args.question == "kotzig":
        p3, pm = kotzig_check(g, budget)
        result = {"has_p3_decomposition": p3, "has_perfect_matching": pm}
    else:
        raise PathdecompError(f"unknown oracle question {args.question!r}")
    _write_out(json.dumps(result, indent=1, sort_keys=True) + "\n", args.out)
    return 0


def cmd_bench(args) -> int:
    cfg = _load_config(args.config)
    seeds = [int(s) for s in args.seeds.split(",") if s.strip()]
    rows = bench(args.suite, cfg, seeds)
    if args.out and args.out.endswith(".json"):
        _write_out(json.dumps(rows, indent=1, sort_keys=True) + "\n", args.out)
    else:
        _write_out(bench_rows_to_csv(rows), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="pathdecomp",
        description=(
            "Approximate path decompositions and path covers of "
            "near-regular graphs"
        ),
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a graph as an edge list")
    p.add_argument("--type", required=True,
                   choices=["regular", "cliques", "cycle", "complete", "bipartite", "bridge"])
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--n2", type=int, default=None)
    p.add_argument("--d", type=int, default=0)
    p.add_argument("--copies", type=int, default=1)
    p.add_argument("--size", type=int, default=4)
    p.add_argument("--bridges", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("decompose", help="edge decomposition into fixed-length paths")
    p.add_argument("graph")
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--config", default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.add_argument("--paths-out", default=None)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("cover", help="vertex-disjoint path cover")
    p.add_argument("graph")
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--config", default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_cover)

    p = sub.add_parser("verify", help="audit a path list against a graph")
    p.add_argument("graph")
    p.add_argument("paths")
    p.add_argument("--out", default=None)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="brute-force answers on tiny graphs")
    p.add_argument("question",
                   choices=["min-path-cover", "p-decomposition", "kotzig"])
    p.add_argument("graph")
    p.add_argument("--length", type=int, default=None)
    p.add_argument("--max-vertices", type=int, default=12)
    p.add_argument("--max-edges", type=int, default=30)
    p.add_argument("--time-limit", type=float, default=60.0)
    p.add_argument("--out", default=None)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("bench", help="run the pipeline across a suite")
    p.add_argument("--suite", nargs="+", required=True,
                   help="graph specs like regular:n=1000,d=32 cliques:copies=4,size=33")
    p.add_argument("--config", default=None)
    p.add_argument("--seeds", default="0")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except PathdecompError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
