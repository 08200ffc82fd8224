from __future__ import annotations
import argparse
import csv
import dataclasses
import io
import json
import logging
import os
import sys
from pathlib import Path
from typing import Dict, Optional, Sequence
ROOT = Path(__file__).resolve().parent
sys.path.append(str(ROOT))
from analysis.centrality import MEASURE_ALIASES, centrality
from analysis.metrics import DEFAULT_SOURCES, EXACT, EXACT_NODE_LIMIT, SAMPLED, distance_stats
from analysis.stats_fit import APPROX, DEFAULT_BOOTSTRAPS, DISCRETE, degree_histogram, fit_power_law, tree_centrality_correlation
from graphs.core import degree_sequence, largest_connected_component, read_graph, write_graph
from graphs.generators import FAMILY_ALIASES, GenSpec, generate
from harness.config import ExperimentConfig, load_config
from harness.run_experiments import execute
from spanning.algorithms import ALGORITHMS, build_tree
from utils.errors import GraphError
from utils.seeds import resolve_seed
from utils.version import version_string

logger = logging.getLogger("cli")

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"


def _emit(text: str, out: str) -> None:
    if out == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    Path(out).write_text(text, encoding="utf-8")


def _json(payload: Dict[str, object]) -> str:
    return json.dumps(payload, sort_keys=True) + "\n"


def cmd_generate(args: argparse.Namespace) -> None:
    seed = resolve_seed(args.seed)
    g = generate(GenSpec(args.family, args.nodes, args.kavg, seed))
    if args.lcc:
        g = largest_connected_component(g)
    header = _json({"family": FAMILY_ALIASES[args.family], "n": g.n, "m": g.m, "k_avg": g.k_avg, "k_avg_requested": args.kavg, "seed": seed}).strip()
    write_graph(g, args.out, header=header)


def cmd_tree(args: argparse.Namespace) -> None:
    g, labels = read_graph(args.input, lcc=args.lcc)
    seed = resolve_seed(args.seed)
    t = build_tree(args.algo, g, seed)
    summary = t.summary()
    summary["root"] = None if t.root is None else labels[t.root]
    write_graph(t.tree, args.out, labels=labels, header=json.dumps(summary, sort_keys=True))


def cmd_metrics(args: argparse.Namespace) -> None:
    g, _ = read_graph(args.input, lcc=args.lcc)
    if args.exact:
        mode = EXACT
    elif args.sources is not None:
        mode = SAMPLED
    else:
        mode = EXACT if g.n <= EXACT_NODE_LIMIT else SAMPLED
    seed = resolve_seed(args.seed) if mode == SAMPLED else args.seed
    sources = args.sources if args.sources is not None else DEFAULT_SOURCES
    stats = distance_stats(g, mode, sources, seed, threads=args.threads)
    payload = {"n": g.n, "m": g.m, "k_avg": g.k_avg, **stats.to_dict()}
    if mode == SAMPLED:
        payload["seed"] = seed
    _emit(_json(payload), args.out)


def cmd_centrality(args: argparse.Namespace) -> None:
    g, labels = read_graph(args.input, lcc=args.lcc)
    vector = centrality(g, args.measure, threads=args.threads)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["node", "score"])
    for label, score in zip(labels, vector.values.tolist()):
        writer.writerow([label, repr(score)])
    _emit(buffer.getvalue(), args.out)


def cmd_fitpl(args: argparse.Namespace) -> None:
    g, _ = read_graph(args.input, lcc=args.lcc)
    seed = resolve_seed(args.seed)
    if args.tree_algo is not None:
        g = build_tree(args.tree_algo, g, seed).tree
    fit = fit_power_law(degree_sequence(g), bootstraps=args.bootstraps, seed=seed, method=args.method, threads=args.threads)
    payload = fit.to_dict()
    payload["seed"] = seed
    payload["tree_algo"] = args.tree_algo
    payload["histogram"] = [[k, p_k] for k, p_k in degree_histogram(g)]
    _emit(_json(payload), args.out)


def cmd_correlate(args: argparse.Namespace) -> None:
    g, _ = read_graph(args.input, lcc=args.lcc)
    seed = resolve_seed(args.seed)
    report = tree_centrality_correlation(g, args.algo, args.measure, args.realizations, seed, threads=args.threads)
    name = "stdin" if args.input == "-" else Path(args.input).stem
    report = dataclasses.replace(report, per_network=((name, report.r),))
    payload = report.to_dict()
    payload["seed"] = seed
    _emit(_json(payload), args.out)


def cmd_experiment(args: argparse.Namespace) -> None:
    cfg = load_config(args.config)
    if args.threads is not None:
        cfg = ExperimentConfig(**{**cfg.to_dict(), "threads": args.threads})
    execute(cfg, args.out_dir)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cli.py", description="Spanning-tree backbones of complex networks.")
    parser.add_argument("--version", action="version", version=version_string())
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_io(p: argparse.ArgumentParser, with_input: bool = True) -> None:
        if with_input:
            p.add_argument("--in", dest="input", default="-")
            p.add_argument("--lcc", action="store_true", help="reduce the input to its largest component")
        p.add_argument("--out", default="-")

    p = sub.add_parser("generate")
    p.add_argument("--family", choices=sorted(FAMILY_ALIASES), required=True)
    p.add_argument("--nodes", type=int, required=True)
    p.add_argument("--kavg", type=float, default=10.0)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--lcc", action="store_true", help="keep only the largest component")
    add_io(p, with_input=False)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("tree")
    p.add_argument("--algo", choices=sorted(ALGORITHMS), required=True)
    p.add_argument("--seed", type=int, default=None)
    add_io(p)
    p.set_defaults(func=cmd_tree)

    p = sub.add_parser("metrics")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--exact", action="store_true")
    group.add_argument("--sources", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--threads", type=int, default=None)
    add_io(p)
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("centrality")
    p.add_argument("--measure", choices=sorted(MEASURE_ALIASES), required=True)
    p.add_argument("--threads", type=int, default=None)
    add_io(p)
    p.set_defaults(func=cmd_centrality)

    p = sub.add_parser("fitpl")
    p.add_argument("--tree-algo", choices=sorted(ALGORITHMS), default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--bootstraps", type=int, default=DEFAULT_BOOTSTRAPS)
    p.add_argument("--method", choices=(DISCRETE, APPROX), default=DISCRETE)
    p.add_argument("--threads", type=int, default=None)
    add_io(p)
    p.set_defaults(func=cmd_fitpl)

    p = sub.add_parser("correlate")
    p.add_argument("--algo", choices=sorted(ALGORITHMS), required=True)
    p.add_argument("--measure", choices=sorted(MEASURE_ALIASES), required=True)
    p.add_argument("--realizations", type=int, default=25)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--threads", type=int, default=None)
    add_io(p)
    p.set_defaults(func=cmd_correlate)

    p = sub.add_parser("experiment")
    p.add_argument("--config", required=True)
    p.add_argument("--out-dir", default="results")
    p.add_argument("--threads", type=int, default=None)
    p.set_defaults(func=cmd_experiment)
    return parser


def configure_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(stream=sys.stderr, level=level, format=LOG_FORMAT, force=True)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    try:
        args.func(args)
    except BrokenPipeError:
        # downstream closed early; silence the flush at interpreter exit
        devnull = os.open(os.devnull, os.O_WRONLY)
        os.dup2(devnull, sys.stdout.fileno())
        return 1
    except (GraphError, OSError) as exc:
        logger.error("%s", exc)
        return 1
    return 0

if __name__ == "__main__":
    sys.exit(main())
