from __future__ import annotations
import argparse
import csv
import json
import logging
import math
import platform
import sys
import time
from dataclasses import asdict, dataclass, field, fields
from multiprocessing import Pool
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union
ROOT = Path(__file__).resolve().parents[1]
sys.path.append(str(ROOT))
import numpy as np
import pandas as pd
import scipy
from analysis.metrics import DistanceStats, distance_stats, lattice_distance_estimate, random_graph_diameter_estimate, resolve_threads
from analysis.stats_fit import correlation_matrix, degree_histogram, fit_power_law
from graphs.core import Graph, degree_sequence, largest_connected_component, read_graph
from graphs.generators import GenSpec, generate
from harness.config import (
    COLLECTION_REAL,
    CORRELATION,
    GRAPH,
    SCALING_SYNTHETIC,
    ExperimentConfig,
    load_config,
)
from spanning.algorithms import build_tree
from utils.errors import DegenerateFitError, GraphError, InvalidParameterError
from utils.seeds import derive_seed
from utils.version import __version__, build_hash

logger = logging.getLogger(__name__)

EDGE_LIST_SUFFIXES = (".txt", ".edges", ".el", ".edgelist")
METRICS = ("d_avg", "d_max", "d_std", "c_d")
NA = "NA"


@dataclass(frozen=True)
class ExperimentRecord:
    subject: str
    size: int
    n: int
    m: int
    algorithm: str
    realization: int
    seed: int
    d_avg: float
    d_max: int
    d_std: float
    c_d: float
    mode: str
    gamma: Optional[float] = None
    p_value: Optional[float] = None

    def sort_key(self) -> Tuple[str, int, str, int]:
        return (self.subject, self.size, self.algorithm, self.realization)


@dataclass(frozen=True)
class CorrelationCell:
    subject: str
    size: int
    n: int
    m: int
    algorithm: str
    measure: str
    r: float
    realizations: int
    seed: int

    def sort_key(self) -> Tuple[str, int, str, str]:
        return (self.subject, self.size, self.algorithm, self.measure)


@dataclass(frozen=True)
class HistogramRow:
    """Degree distribution of one subject and algorithm, pooled over its realizations."""

    subject: str
    algorithm: str
    k: int
    p_k: float


@dataclass(frozen=True)
class Skip:
    subject: str
    size: int
    algorithm: str
    realization: Optional[int]
    reason: str


Record = Union[ExperimentRecord, CorrelationCell]
CellOutput = Tuple[List[Record], List[Skip], List[HistogramRow]]


@dataclass
class ExperimentResult:
    kind: str
    records: List[Record] = field(default_factory=list)
    skipped: List[Skip] = field(default_factory=list)
    histograms: List[HistogramRow] = field(default_factory=list)


def collect_files(input_dir: str | Path) -> List[Path]:
    target = Path(input_dir)
    if target.is_file():
        return [target]
    if not target.is_dir():
        raise FileNotFoundError(f"input directory {target} does not exist")
    return [path for path in sorted(target.rglob("*")) if path.is_file() and path.suffix in EDGE_LIST_SUFFIXES]


def subject_id(path: Path, root: Path) -> str:
    if root.is_file():
        return path.stem
    return path.relative_to(root).with_suffix("").as_posix()


def _run_tasks(worker: Callable[..., CellOutput], tasks: List[tuple], threads: Optional[int]) -> CellOutput:
    records: List[Record] = []
    skipped: List[Skip] = []
    histograms: List[HistogramRow] = []
    workers = min(resolve_threads(threads), len(tasks))
    if workers <= 1:
        results = [worker(*task) for task in tasks]
    else:
        with Pool(processes=workers) as pool:
            results = pool.starmap(worker, tasks)
    for cell_records, cell_skips, cell_histograms in results:
        records.extend(cell_records)
        skipped.extend(cell_skips)
        histograms.extend(cell_histograms)
    records.sort(key=lambda record: record.sort_key())
    skipped.sort(key=lambda skip: (skip.subject, skip.size, skip.algorithm, -1 if skip.realization is None else skip.realization))
    histograms.sort(key=lambda row: (row.subject, row.algorithm, row.k))
    return records, skipped, histograms


def _inner_threads(cfg: ExperimentConfig, tasks: int) -> int:
    # pool workers are daemonic and cannot start their own pools
    return resolve_threads(cfg.threads) if min(resolve_threads(cfg.threads), tasks) <= 1 else 1


def _record(
    subject: str,
    size: int,
    target: Graph,
    algorithm: str,
    realization: int,
    seed: int,
    stats: DistanceStats,
    fit: Tuple[Optional[float], Optional[float]] = (None, None),
) -> ExperimentRecord:
    return ExperimentRecord(
        subject=subject,
        size=size,
        n=target.n,
        m=target.m,
        algorithm=algorithm,
        realization=realization,
        seed=seed,
        d_avg=stats.d_avg,
        d_max=stats.d_max,
        d_std=stats.d_std,
        c_d=stats.c_d,
        mode=stats.mode,
        gamma=fit[0],
        p_value=fit[1],
    )


def _stats(cfg: ExperimentConfig, target: Graph, seed: int, threads: int) -> DistanceStats:
    return distance_stats(target, cfg.metric_mode, cfg.sources, derive_seed(seed, "sources"), threads=threads)


def _scaling_cell(cfg: ExperimentConfig, size: int, realization: int, threads: int) -> CellOutput:
    """Generate one realization of one ladder size and measure the graph and each tree on it."""
    subject = cfg.family
    graph_seed = derive_seed(cfg.seed, subject, size, GRAPH, realization)
    try:
        g = largest_connected_component(generate(GenSpec(cfg.family, size, cfg.k_avg, graph_seed)))
    except GraphError as exc:
        logger.warning("%s n=%d realization %d: generation failed: %s", subject, size, realization, exc)
        return [], [Skip(subject, size, algorithm, realization, str(exc)) for algorithm in cfg.algorithms], []
    records: List[Record] = []
    skipped: List[Skip] = []
    for algorithm in cfg.algorithms:
        seed = graph_seed if algorithm == GRAPH else derive_seed(cfg.seed, subject, size, algorithm, realization)
        try:
            target = g if algorithm == GRAPH else build_tree(algorithm, g, seed).tree
            records.append(_record(subject, size, target, algorithm, realization, seed, _stats(cfg, target, seed, threads)))
        except GraphError as exc:
            logger.warning("%s n=%d %s realization %d skipped: %s", subject, size, algorithm, realization, exc)
            skipped.append(Skip(subject, size, algorithm, realization, str(exc)))
    logger.info("%s n=%d realization %d done", subject, size, realization)
    return records, skipped, []


def run_scaling(cfg: ExperimentConfig) -> ExperimentResult:
    tasks = [(size, realization) for size in cfg.sizes for realization in range(cfg.realizations)]
    threads = _inner_threads(cfg, len(tasks))
    outputs = _run_tasks(_scaling_cell, [(cfg, size, r, threads) for size, r in tasks], cfg.threads)
    return ExperimentResult(SCALING_SYNTHETIC, *outputs)


def _fit_columns(cfg: ExperimentConfig, target: Graph, seed: int) -> Tuple[Optional[float], Optional[float]]:
    if cfg.bootstraps <= 0:
        return (None, None)
    try:
        fit = fit_power_law(degree_sequence(target), bootstraps=cfg.bootstraps, seed=derive_seed(seed, "fit"))
    except DegenerateFitError as exc:
        logger.debug("no power-law fit: %s", exc)
        return (None, None)
    return (fit.gamma, fit.p_value)


def _load_subject(path: str, subject: str) -> Tuple[Optional[Graph], Optional[Skip]]:
    try:
        g, _ = read_graph(path, lcc=True)
    except (GraphError, OSError) as exc:
        logger.warning("skipping %s: %s", path, exc)
        return None, Skip(subject, 0, GRAPH, None, f"unreadable: {exc}")
    if g.n < 2:
        logger.warning("skipping %s: largest component has %d node", path, g.n)
        return None, Skip(subject, g.n, GRAPH, None, f"degenerate: largest component has n={g.n}")
    return g, None


def _add_histogram(totals: Dict[int, float], target: Graph) -> None:
    for k, p_k in degree_histogram(target):
        totals[k] = totals.get(k, 0.0) + p_k


def _pooled_histogram(subject: str, algorithm: str, totals: Dict[int, float], count: int) -> List[HistogramRow]:
    return [HistogramRow(subject, algorithm, k, total / count) for k, total in sorted(totals.items())]


def _collection_subject(cfg: ExperimentConfig, path: str, subject: str, threads: int) -> CellOutput:
    g, skip = _load_subject(path, subject)
    if g is None:
        return [], [skip], []
    size = g.n
    records: List[Record] = []
    skipped: List[Skip] = []
    histograms: List[HistogramRow] = []
    if GRAPH in cfg.algorithms:
        # the graph is fixed, so its distances are measured once and repeated per realization
        seed = derive_seed(cfg.seed, subject, GRAPH, 0)
        try:
            stats = _stats(cfg, g, seed, threads)
            fit = _fit_columns(cfg, g, seed)
            records.extend(_record(subject, size, g, GRAPH, r, seed, stats, fit) for r in range(cfg.realizations))
            histograms.extend(HistogramRow(subject, GRAPH, k, p_k) for k, p_k in degree_histogram(g))
        except GraphError as exc:
            logger.warning("%s graph skipped: %s", subject, exc)
            skipped.append(Skip(subject, size, GRAPH, None, str(exc)))
    for algorithm in cfg.tree_algorithms:
        totals: Dict[int, float] = {}
        built = 0
        for realization in range(cfg.realizations):
            seed = derive_seed(cfg.seed, subject, algorithm, realization)
            try:
                tree = build_tree(algorithm, g, seed).tree
                _add_histogram(totals, tree)
                built += 1
                records.append(
                    _record(subject, size, tree, algorithm, realization, seed, _stats(cfg, tree, seed, threads), _fit_columns(cfg, tree, seed))
                )
            except GraphError as exc:
                logger.warning("%s %s realization %d skipped: %s", subject, algorithm, realization, exc)
                skipped.append(Skip(subject, size, algorithm, realization, str(exc)))
        if built:
            histograms.extend(_pooled_histogram(subject, algorithm, totals, built))
    logger.info("%s done (n=%d, m=%d)", subject, g.n, g.m)
    return records, skipped, histograms


def run_collection(cfg: ExperimentConfig) -> ExperimentResult:
    root = Path(cfg.input_dir)
    files = collect_files(root)
    if not files:
        logger.warning("no edge-list files under %s", root)
    threads = _inner_threads(cfg, len(files))
    tasks = [(cfg, str(path), subject_id(path, root), threads) for path in files]
    return ExperimentResult(COLLECTION_REAL, *_run_tasks(_collection_subject, tasks, cfg.threads))


def _correlation_cells(cfg: ExperimentConfig, g: Graph, subject: str, size: int, threads: int) -> CellOutput:
    seed = derive_seed(cfg.seed, subject, size, "trees")
    try:
        matrix = correlation_matrix(g, cfg.tree_algorithms, cfg.measures, cfg.realizations, seed, threads=threads)
    except GraphError as exc:
        logger.warning("%s skipped: %s", subject, exc)
        return [], [Skip(subject, size, algorithm, None, str(exc)) for algorithm in cfg.tree_algorithms], []
    cells = [
        CorrelationCell(subject, size, g.n, g.m, algorithm, measure, r, cfg.realizations, seed)
        for (algorithm, measure), r in matrix.items()
    ]
    logger.info("%s correlations done", subject)
    return cells, [], []


def _correlation_file(cfg: ExperimentConfig, path: str, subject: str, threads: int) -> CellOutput:
    g, skip = _load_subject(path, subject)
    if g is None:
        return [], [skip], []
    return _correlation_cells(cfg, g, subject, g.n, threads)


def _correlation_synthetic(cfg: ExperimentConfig, size: int, threads: int) -> CellOutput:
    subject = cfg.family
    try:
        g = largest_connected_component(generate(GenSpec(cfg.family, size, cfg.k_avg, derive_seed(cfg.seed, subject, size, GRAPH, 0))))
    except GraphError as exc:
        logger.warning("%s n=%d: generation failed: %s", subject, size, exc)
        return [], [Skip(subject, size, GRAPH, None, str(exc))], []
    return _correlation_cells(cfg, g, subject, size, threads)


def run_correlation(cfg: ExperimentConfig) -> ExperimentResult:
    if cfg.input_dir is not None:
        root = Path(cfg.input_dir)
        files = collect_files(root)
        threads = _inner_threads(cfg, len(files))
        tasks = [(cfg, str(path), subject_id(path, root), threads) for path in files]
        outputs = _run_tasks(_correlation_file, tasks, cfg.threads)
    else:
        threads = _inner_threads(cfg, len(cfg.sizes))
        tasks = [(cfg, size, threads) for size in cfg.sizes]
        outputs = _run_tasks(_correlation_synthetic, tasks, cfg.threads)
    return ExperimentResult(CORRELATION, *outputs)


RUNNERS: Dict[str, Callable[[ExperimentConfig], ExperimentResult]] = {
    SCALING_SYNTHETIC: run_scaling,
    COLLECTION_REAL: run_collection,
    CORRELATION: run_correlation,
}


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    return RUNNERS[cfg.kind](cfg)


def aggregate(records: Sequence[ExperimentRecord], k_avg: Optional[float] = None) -> pd.DataFrame:
    """Mean, std and stderr of each distance metric per (subject, size, algorithm).

    With ``k_avg`` the table also carries the log n / log k and sqrt n reference curves at each size.
    """
    keys = ["subject", "size", "algorithm"]
    columns = keys + ["n_mean", "realizations"] + [f"{metric}_{stat}" for metric in METRICS for stat in ("mean", "std", "stderr")]
    if k_avg is not None:
        columns += ["log_estimate", "sqrt_estimate"]
    if not records:
        return pd.DataFrame(columns=columns)
    frame = pd.DataFrame([asdict(record) for record in records])
    grouped = frame.groupby(keys, sort=True)
    out = grouped[list(METRICS)].agg(["mean", "std", "sem"])
    out.columns = [f"{metric}_{'stderr' if stat == 'sem' else stat}" for metric, stat in out.columns]
    out["n_mean"] = grouped["n"].mean()
    out["realizations"] = grouped.size()
    out = out.reset_index()
    if k_avg is not None:
        out["log_estimate"] = [_log_estimate(size, k_avg) for size in out["size"]]
        out["sqrt_estimate"] = [lattice_distance_estimate(size) for size in out["size"]]
    return out[columns]


def _log_estimate(n: int, k_avg: float) -> float:
    try:
        return random_graph_diameter_estimate(n, k_avg)
    except InvalidParameterError:
        return float("nan")


def correlation_table(cells: Sequence[CorrelationCell]) -> pd.DataFrame:
    """Heatmap-ready matrix: one row per (subject, size, measure), one column per algorithm."""
    if not cells:
        return pd.DataFrame(columns=["subject", "size", "measure"])
    frame = pd.DataFrame([asdict(cell) for cell in cells])
    frame["r"] = frame["r"].astype(float)
    table = frame.set_index(["subject", "size", "measure", "algorithm"])["r"].unstack("algorithm")
    table.columns.name = None
    return table.sort_index().reset_index()


def collection_summary(records: Sequence[ExperimentRecord]) -> Dict[str, object]:
    """Collection-level ranges of n, m, mean degree and mean distance over the graph records."""
    graphs = [record for record in records if record.algorithm == GRAPH]
    if not graphs:
        return {"networks": 0}
    frame = pd.DataFrame([asdict(record) for record in graphs])
    per_subject = frame.groupby("subject", sort=True).agg(n=("n", "first"), m=("m", "first"), d_avg=("d_avg", "mean"))
    per_subject["k_avg"] = 2.0 * per_subject["m"] / per_subject["n"]
    summary: Dict[str, object] = {"networks": int(len(per_subject))}
    for column in ("n", "m", "k_avg", "d_avg"):
        low, high = per_subject[column].min(), per_subject[column].max()
        summary[column] = [low.item(), high.item()]
    return summary


def _csv_value(value: object) -> object:
    if value is None:
        return ""
    if isinstance(value, float) and math.isnan(value):
        return NA
    return value


def write_records(records: Sequence[Record], path: Path) -> None:
    if not records:
        path.write_text("", encoding="utf-8")
        return
    fieldnames = [item.name for item in fields(records[0])]
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.DictWriter(handle, fieldnames=fieldnames)
        writer.writeheader()
        for record in records:
            writer.writerow({key: _csv_value(value) for key, value in asdict(record).items()})


def write_histograms(rows: Sequence[HistogramRow], path: Path) -> None:
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.DictWriter(handle, fieldnames=[item.name for item in fields(HistogramRow)])
        writer.writeheader()
        for row in rows:
            writer.writerow(asdict(row))


def write_outputs(result: ExperimentResult, cfg: ExperimentConfig, out_dir: str | Path, wall_seconds: float) -> Path:
    target = Path(out_dir)
    target.mkdir(parents=True, exist_ok=True)
    write_records(result.records, target / "records.csv")
    if result.kind == CORRELATION:
        table = correlation_table(result.records)
    else:
        table = aggregate(result.records, k_avg=cfg.k_avg if result.kind == SCALING_SYNTHETIC else None)
    table.to_csv(target / "aggregate.csv", index=False, na_rep=NA)
    if result.kind == COLLECTION_REAL:
        write_histograms(result.histograms, target / "histograms.csv")
    meta: Dict[str, object] = {
        "version": __version__,
        "build": build_hash(),
        "python": platform.python_version(),
        "numpy": np.__version__,
        "pandas": pd.__version__,
        "scipy": scipy.__version__,
        "config": cfg.to_dict(),
        "seed": cfg.seed,
        "wall_seconds": wall_seconds,
        "records": len(result.records),
        "skipped": [asdict(skip) for skip in result.skipped],
    }
    if result.kind == COLLECTION_REAL:
        meta["collection"] = collection_summary(result.records)
    (target / "meta.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return target


def execute(cfg: ExperimentConfig, out_dir: str | Path) -> ExperimentResult:
    start = time.perf_counter()
    result = run_experiment(cfg)
    elapsed = time.perf_counter() - start
    write_outputs(result, cfg, out_dir, elapsed)
    logger.info("%s: %d records, %d skipped in %.1fs", cfg.kind, len(result.records), len(result.skipped), elapsed)
    return result


def main(argv: Optional[Iterable[str]] = None) -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--config", required=True)
    parser.add_argument("--out-dir", default="results")
    parser.add_argument("--threads", type=int, default=None)
    args = parser.parse_args(argv)
    logging.basicConfig(stream=sys.stderr, level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    cfg = load_config(args.config)
    if args.threads is not None:
        cfg = ExperimentConfig(**{**cfg.to_dict(), "threads": args.threads})
    execute(cfg, args.out_dir)

if __name__ == "__main__":
    main()
