"""Command-line front end: ``burnsolver {solve,decide,bench,gen,precompute}``."""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from pathlib import Path

import numpy as np

from .bench import ManifestError, format_table, load_manifest, rows_to_json, run_benchmark
from .driver import cbag_decision, find_burning_length, json_label, probe_seed
from .ga import GaConfig
from .generators import generate_barabasi_albert, generate_erdos_renyi, generate_gnp
from .graph import GraphParseError, format_edge_list, read_edge_list
from .precompute import MemoryBudgetError, cache_key, precompute

EXIT_OK = 0
EXIT_NOT_FOUND = 1
EXIT_INPUT = 2

log = logging.getLogger("burnsolver")


def _add_ga_flags(p: argparse.ArgumentParser) -> None:
    d = GaConfig()
    p.add_argument("--seed", type=int, default=d.seed)
    p.add_argument("--pop-size", type=int, default=d.pop_size)
    p.add_argument("--max-gens", type=int, default=d.max_generations)
    p.add_argument("--skip-number", type=int, default=d.skip_number)
    p.add_argument("--alpha", type=float, default=d.alpha)
    p.add_argument("--beta", type=float, default=d.beta)
    p.add_argument("--mutation-prob", type=float, default=d.mutation_prob)
    p.add_argument("--crossover-pop", type=int, default=d.crossover_population)
    p.add_argument("--chr-size-offset", type=int, default=d.chr_size_offset,
                   help="chromosome size is b minus this (default: %(default)s)")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--json", action="store_true", help="machine-readable output")


def _add_cache_flag(p: argparse.ArgumentParser) -> None:
    p.add_argument("--cache", metavar="DIR", default=None,
                   help="precompute cache directory (env BURNSOLVER_CACHE)")


def _config(args: argparse.Namespace) -> GaConfig:
    return GaConfig(
        seed=args.seed,
        pop_size=args.pop_size,
        max_generations=args.max_gens,
        skip_number=args.skip_number,
        alpha=args.alpha,
        beta=args.beta,
        mutation_prob=args.mutation_prob,
        crossover_population=args.crossover_pop,
        chr_size_offset=args.chr_size_offset,
        threads=max(1, args.threads),
    )


def _cache_dir(args: argparse.Namespace) -> str | None:
    return args.cache or os.environ.get("BURNSOLVER_CACHE") or None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="burnsolver", description="Graph burning solver")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="find a short burning sequence")
    p.add_argument("--graph", required=True, type=Path)
    p.add_argument("--name", default=None)
    p.add_argument("--timing", action="store_true", help="include wall times in JSON output")
    _add_ga_flags(p)
    _add_cache_flag(p)

    p = sub.add_parser("decide", help="search for a sequence of length at most B")
    p.add_argument("--graph", required=True, type=Path)
    p.add_argument("--b", required=True, type=int)
    _add_ga_flags(p)
    _add_cache_flag(p)

    p = sub.add_parser("bench", help="run a benchmark manifest")
    p.add_argument("--manifest", required=True, type=Path)
    p.add_argument("--out", type=Path, default=None, help="also write JSON rows here")
    _add_ga_flags(p)

    p = sub.add_parser("gen", help="emit a random graph as an edge list")
    p.add_argument("--model", choices=["er", "ba", "gnp"], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--edges", type=int, help="edge count (er)")
    p.add_argument("--attach", type=int, default=3, help="edges per new vertex (ba)")
    p.add_argument("--p", type=float, help="edge probability (gnp)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, default=None)

    p = sub.add_parser("precompute", help="fill the precompute cache for a graph")
    p.add_argument("--graph", required=True, type=Path)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    _add_cache_flag(p)
    return parser


def _cmd_solve(args) -> int:
    g = read_edge_list(args.graph)
    cfg = _config(args)
    report = find_burning_length(g, cfg, name=args.name or args.graph.name, cache_dir=_cache_dir(args))
    if args.json:
        print(json.dumps(report.to_json_dict(g, timing=args.timing), indent=2))
    else:
        print(f"graph       {report.graph_name} (n={g.n}, m={g.m})")
        print(f"bestLength  {report.best_length}")
        print(f"witness     {' '.join(g.label_of(report.witness))}")
        print(f"probes      " + ", ".join(f"b={d.b}:{'found' if d.found else 'NOT_FOUND'}" for d in report.decisions))
        print(f"time        precompute {report.precompute_seconds:.2f}s, total {report.total_seconds:.2f}s")
    return EXIT_OK


def _cmd_decide(args) -> int:
    if args.b < 1:
        print("error: --b must be >= 1", file=sys.stderr)
        return EXIT_INPUT
    g = read_edge_list(args.graph)
    cfg = _config(args)
    pre = precompute(g, threads=cfg.threads, seed=cfg.seed, cache_dir=_cache_dir(args))
    dec = cbag_decision(g, pre, args.b, cfg, np.random.default_rng(probe_seed(cfg.seed, args.b)))
    witness = [json_label(g.labels[v]) for v in dec.witness] if dec.witness else None
    if args.json:
        print(json.dumps({"graph": args.graph.name, "b": args.b, "found": dec.found,
                          "witness": witness, "generations": dec.generations}, indent=2))
    elif dec.found:
        print(f"FOUND length {len(dec.witness)}: {' '.join(g.label_of(dec.witness))}")
    else:
        print(f"NOT_FOUND within {dec.generations} generations (not a proof that none exists)")
    return EXIT_OK if dec.found else EXIT_NOT_FOUND


def _cmd_bench(args) -> int:
    manifest = load_manifest(args.manifest)
    rows = run_benchmark(manifest, _config(args))
    text = rows_to_json(rows)
    if args.out:
        args.out.write_text(text + "\n")
    print(text if args.json else format_table(rows))
    return EXIT_NOT_FOUND if any(r.status == "FAIL" for r in rows) else EXIT_OK


def _cmd_gen(args) -> int:
    if args.model == "er":
        if args.edges is None:
            print("error: --edges is required for --model er", file=sys.stderr)
            return EXIT_INPUT
        g = generate_erdos_renyi(args.n, args.edges, args.seed)
    elif args.model == "ba":
        g = generate_barabasi_albert(args.n, args.attach, args.seed)
    else:
        if args.p is None:
            print("error: --p is required for --model gnp", file=sys.stderr)
            return EXIT_INPUT
        g = generate_gnp(args.n, args.p, args.seed)
    text = format_edge_list(g)
    if args.out:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_precompute(args) -> int:
    cache = _cache_dir(args)
    if cache is None:
        print("error: --cache DIR or BURNSOLVER_CACHE is required", file=sys.stderr)
        return EXIT_INPUT
    g = read_edge_list(args.graph)
    start = time.perf_counter()
    precompute(g, threads=max(1, args.threads), seed=args.seed, cache_dir=cache)
    key = cache_key(g, "auto", 512, args.seed)
    print(f"{args.graph.name}: n={g.n} m={g.m} cached as {key[:16]} in {time.perf_counter() - start:.2f}s")
    return EXIT_OK


COMMANDS = {
    "solve": _cmd_solve,
    "decide": _cmd_decide,
    "bench": _cmd_bench,
    "gen": _cmd_gen,
    "precompute": _cmd_precompute,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return COMMANDS[args.command](args)
    except FileNotFoundError as exc:
        print(f"error: {exc.filename}: file not found", file=sys.stderr)
    except (GraphParseError, ManifestError, MemoryBudgetError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
