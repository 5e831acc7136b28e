"""Command-line front end: gen, solve, embed, bench, report.

Exit codes: 0 on success, 1 for usage errors (bad flags, malformed
spec files), 2 for runtime failures (unreadable input, solver errors).
"""

from __future__ import annotations

import argparse
import json
import sys

from .bench import (ALGORITHMS, GENERATORS, SWEEPS, ExperimentSpec,
                    read_records_csv, render, run_experiment)
from .embedding import embed_graph, save_embedding
from .generators import LomaxConfig, gen_adversarial, gen_lomax, gen_uniform_random
from .graph import Objective, load_graph, save_graph
from .greedy import greedy_match
from .exact import solve as exact_solve
from .pipeline import approx_match
from .walks import METHODS, SIMILARITIES, EmbeddingConfig

_OBJECTIVES = tuple(o.value for o in Objective)
_FORMATS = ("csv", "svg")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on bad flags; remap to 1."""

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _csv_list(text: str) -> tuple:
    return tuple(part.strip() for part in text.split(",") if part.strip())


def _parse_sweep(text: str) -> tuple:
    if "=" not in text:
        raise UsageError(f"--sweep expects var=v1,v2,..., got {text!r}")
    var, _, values = text.partition("=")
    var = var.strip()
    if var not in SWEEPS:
        raise UsageError(f"unknown sweep variable {var!r}; expected one of {SWEEPS}")
    grid = _csv_list(values)
    if not grid:
        raise UsageError(f"--sweep {var}= needs at least one value")
    try:
        return var, tuple(float(v) for v in grid)
    except ValueError:
        raise UsageError(f"non-numeric sweep value in {values!r}") from None


def _embedding_flags(parser, defaults=EmbeddingConfig()):
    parser.add_argument("--dimensions", type=int, default=defaults.dimensions)
    parser.add_argument("--walks-per-node", type=int, default=defaults.walks_per_node)
    parser.add_argument("--walk-length", type=int, default=defaults.walk_length)
    parser.add_argument("--window", type=int, default=defaults.window)
    parser.add_argument("--negatives", type=int, default=defaults.negatives)
    parser.add_argument("--epochs", type=int, default=defaults.epochs)
    parser.add_argument("--p", type=float, default=defaults.p)
    parser.add_argument("--q", type=float, default=defaults.q)
    parser.add_argument("--similarity", choices=SIMILARITIES,
                        default=defaults.similarity)
    parser.add_argument("--knn", type=int, default=defaults.knn_sparsify)


def _embedding_config(args, method: str) -> EmbeddingConfig:
    return EmbeddingConfig(
        method=method, dimensions=args.dimensions,
        walks_per_node=args.walks_per_node, walk_length=args.walk_length,
        window=args.window, negatives=args.negatives, epochs=args.epochs,
        p=args.p, q=args.q, similarity=args.similarity,
        knn_sparsify=args.knn, seed=args.seed)


def _build_parser() -> _Parser:
    top = _Parser(prog="embmatch",
                  description="Matching solvers and embedding-surrogate benchmarks")
    sub = top.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("gen", help="generate an instance file")
    gen.add_argument("--generator", choices=GENERATORS, required=True)
    gen.add_argument("--t", type=int, default=6, help="adversarial recursion depth")
    gen.add_argument("--epsilon", type=float, default=1e-6)
    gen.add_argument("--alpha", type=float, default=2.0, help="Lomax shape")
    gen.add_argument("--lam", type=float, default=1.0, help="Lomax scale")
    gen.add_argument("--n", type=int, default=100)
    gen.add_argument("--bipartite", action="store_true")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True, help="output graph file")

    slv = sub.add_parser("solve", help="solve one instance")
    slv.add_argument("--input", required=True, help="graph file")
    slv.add_argument("--objective", choices=_OBJECTIVES, default="mcm")
    way = slv.add_mutually_exclusive_group(required=True)
    way.add_argument("--exact", action="store_true")
    way.add_argument("--heuristic", choices=("greedy", "deepwalk", "node2vec"))
    slv.add_argument("--surrogate-matcher", choices=("exact", "greedy"),
                     default="exact")
    slv.add_argument("--seed", type=int, default=0)
    _embedding_flags(slv)

    emb = sub.add_parser("embed", help="write vertex vectors for a graph")
    emb.add_argument("--input", required=True, help="graph file")
    emb.add_argument("--method", choices=METHODS, default="deepwalk")
    emb.add_argument("--seed", type=int, default=0)
    emb.add_argument("--out", required=True, help="output embedding file")
    _embedding_flags(emb)

    ben = sub.add_parser("bench", help="run a seeded experiment grid")
    ben.add_argument("--spec", help="JSON file with flat keys mirroring the flags")
    ben.add_argument("--name", default=None)
    ben.add_argument("--generator", choices=GENERATORS, default=None)
    ben.add_argument("--objective", choices=_OBJECTIVES, default=None)
    ben.add_argument("--algorithms", type=_csv_list, default=None,
                     metavar="A1,A2,...", help=f"subset of {ALGORITHMS}")
    ben.add_argument("--sweep", default=None, metavar="VAR=V1,V2,...")
    ben.add_argument("--trials", type=int, default=None)
    ben.add_argument("--seed", type=int, default=None)
    ben.add_argument("--n", type=int, default=None)
    ben.add_argument("--t", type=int, default=None)
    ben.add_argument("--alpha", type=float, default=None)
    ben.add_argument("--epsilon", type=float, default=None)
    ben.add_argument("--bipartite", action="store_true", default=None)
    ben.add_argument("--matcher", choices=("exact", "greedy"), default=None,
                     help="surrogate matcher for the embedding pipelines")
    ben.add_argument("--workers", type=int, default=1)
    ben.add_argument("--no-timings", action="store_true",
                     help="zero the timing columns for byte-stable output")
    ben.add_argument("--out", required=True, help="output directory")
    ben.add_argument("--format", type=_csv_list, default=("csv",),
                     metavar="csv,svg")

    rep = sub.add_parser("report", help="summarize an existing records CSV")
    rep.add_argument("--input", required=True, help="records CSV")
    rep.add_argument("--name", default="")
    rep.add_argument("--out", required=True, help="output directory")
    rep.add_argument("--format", type=_csv_list, default=("csv", "svg"),
                     metavar="csv,svg")
    return top


def _cmd_gen(args) -> int:
    if args.generator == "adversarial":
        graph = gen_adversarial(args.t, args.epsilon).graph
    elif args.generator == "lomax":
        graph = gen_lomax(LomaxConfig(alpha=args.alpha, n=args.n, lam=args.lam,
                                      bipartite=args.bipartite), seed=args.seed)
    else:
        graph = gen_uniform_random(args.n, seed=args.seed,
                                   bipartite=args.bipartite)
    save_graph(graph, args.out)
    print(f"wrote {args.out} (n={graph.n})")
    return 0


def _cmd_solve(args) -> int:
    graph = load_graph(args.input)
    objective = Objective.from_key(args.objective)
    if args.exact:
        report = exact_solve(graph, objective)
    elif args.heuristic == "greedy":
        report = greedy_match(graph, objective=objective)
    else:
        config = _embedding_config(args, args.heuristic)
        report = approx_match(graph, objective, config,
                              matcher=args.surrogate_matcher, seed=args.seed)
    print(f"value {float(report.value)!r}")
    for i, j in report.matching.pairs:
        print(f"{i} {j}")
    return 0


def _cmd_embed(args) -> int:
    graph = load_graph(args.input)
    config = _embedding_config(args, args.method)
    embedding = embed_graph(graph, config, seed=args.seed)
    save_embedding(embedding, args.out)
    print(f"wrote {args.out} ({embedding.n} x {embedding.dimensions})")
    return 0


def _load_bench_spec(path) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read spec file: {exc}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed spec file {path}: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError(f"spec file {path} must hold a JSON object")
    return data


_BENCH_KEYS = ("name", "generator", "objective", "algorithms", "sweep",
               "trials", "seed", "n", "t", "alpha", "epsilon", "bipartite",
               "matcher")


def _cmd_bench(args) -> int:
    merged = {key: getattr(args, key) for key in _BENCH_KEYS}
    if args.spec:
        for key, value in _load_bench_spec(args.spec).items():
            if key not in _BENCH_KEYS:
                raise UsageError(f"unknown spec key {key!r}")
            if merged[key] is None:          # CLI flags win over the file
                if key == "algorithms":
                    # mirror the flag: comma string or a JSON list
                    value = _csv_list(value) if isinstance(value, str) \
                        else tuple(value)
                merged[key] = value
    if merged["generator"] is None or merged["sweep"] is None:
        raise UsageError("bench needs --generator and --sweep "
                         "(either as flags or spec-file keys)")
    sweep, grid = _parse_sweep(merged.pop("sweep"))
    defaults = {"name": f"{merged['generator']}-{merged['objective'] or 'mcm'}",
                "objective": "mcm",
                "algorithms": ("greedy", "deepwalk", "node2vec"),
                "trials": 5, "seed": 0, "n": 100, "t": 6, "alpha": 2.0,
                "epsilon": 1e-6, "bipartite": False, "matcher": "exact"}
    for key, fallback in defaults.items():
        if merged[key] is None:
            merged[key] = fallback
    matcher = {"exact": "exact_on_surrogate",
               "greedy": "euclidean_greedy"}[merged.pop("matcher")]
    try:
        spec = ExperimentSpec(sweep=sweep, grid=grid, matcher=matcher, **merged)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    for fmt in args.format:
        if fmt not in _FORMATS:
            raise UsageError(f"unknown format {fmt!r}; expected csv or svg")
    records = run_experiment(spec, workers=args.workers,
                             timings=not args.no_timings)
    paths = render(records, args.out, formats=args.format, title=spec.name)
    for path in paths:
        print(f"wrote {path}")
    return 0


def _cmd_report(args) -> int:
    records = read_records_csv(args.input)
    for fmt in args.format:
        if fmt not in _FORMATS:
            raise UsageError(f"unknown format {fmt!r}; expected csv or svg")
    paths = render(records, args.out, formats=args.format, title=args.name)
    for path in paths:
        print(f"wrote {path}")
    return 0


_COMMANDS = {"gen": _cmd_gen, "solve": _cmd_solve, "embed": _cmd_embed,
             "bench": _cmd_bench, "report": _cmd_report}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:            # unreadable files, solver failures
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
