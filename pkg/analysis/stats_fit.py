from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass, field
from multiprocessing import Pool
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import zeta

from analysis.centrality import CentralityVector, SHORT_NAMES, canonical_measure, centrality
from analysis.metrics import resolve_threads
from graphs.core import Graph, degree_sequence
from spanning.algorithms import build_tree
from utils.errors import DegenerateFitError, InvalidParameterError, UndefinedCorrelationError
from utils.seeds import derive_seed

logger = logging.getLogger(__name__)

PLAUSIBILITY_THRESHOLD = 0.1
LOW_POWER_SAMPLES = 50
MAX_KMIN_CANDIDATES = 200
DEFAULT_BOOTSTRAPS = 100
DISCRETE = "discrete"
APPROX = "approx"
GAMMA_BOUNDS = (1.0 + 1e-6, 20.0)
# exact inverse-CDF table width for bootstrap tails; larger draws use the continuous approximation
SAMPLER_TABLE = 20_000


@dataclass(frozen=True)
class PowerLawFit:
    gamma: float
    k_min: int
    ks_stat: float
    p_value: float
    n_tail: int
    plausible: bool
    n_samples: int
    bootstraps: int
    p_value_stderr: float
    method: str
    low_power: bool

    def to_dict(self) -> Dict[str, object]:
        return asdict(self)


@dataclass(frozen=True)
class CorrelationReport:
    measure: str
    algorithm: str
    r: float
    realizations: int
    per_network: Tuple[Tuple[str, float], ...] = field(default_factory=tuple)

    def to_dict(self) -> Dict[str, object]:
        out = asdict(self)
        out["per_network"] = [list(item) for item in self.per_network]
        return out


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    a = np.asarray(x, dtype=float)
    b = np.asarray(y, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise InvalidParameterError("pearson needs two vectors of equal length")
    if a.size < 2:
        raise InvalidParameterError("pearson needs at least two observations")
    da = a - a.mean()
    db = b - b.mean()
    sa = float(np.dot(da, da))
    sb = float(np.dot(db, db))
    if sa == 0.0 or sb == 0.0:
        raise UndefinedCorrelationError("correlation is undefined for a constant vector")
    r = float(np.dot(da, db)) / math.sqrt(sa * sb)
    return max(-1.0, min(1.0, r))


def tree_centrality_correlation(
    g: Graph,
    algo: str,
    measure: str,
    realizations: int,
    seed: int,
    threads: Optional[int] = 1,
    reference: Optional[CentralityVector] = None,
) -> CorrelationReport:
    """Mean Pearson r between a centrality on ``g`` and on seeded spanning trees of ``g``."""
    if realizations < 1:
        raise InvalidParameterError("realizations must be at least 1")
    measure = canonical_measure(measure)
    if reference is None:
        reference = centrality(g, measure, threads=threads)
    values = []
    for index in range(realizations):
        tree = build_tree(algo, g, derive_seed(seed, algo, index))
        values.append(pearson(reference.values, centrality(tree.tree, measure, threads=threads).values))
    return CorrelationReport(
        measure=SHORT_NAMES[measure],
        algorithm=algo,
        r=float(np.mean(values)),
        realizations=realizations,
    )


def correlation_matrix(
    g: Graph,
    algos: Sequence[str],
    measures: Sequence[str],
    realizations: int,
    seed: int,
    threads: Optional[int] = 1,
) -> Dict[Tuple[str, str], float]:
    """Mean r for every (algorithm, measure); undefined correlations become NaN."""
    cells: Dict[Tuple[str, str], float] = {}
    for measure in measures:
        canonical = canonical_measure(measure)
        reference = centrality(g, canonical, threads=threads)
        for algo in algos:
            try:
                report = tree_centrality_correlation(
                    g, algo, canonical, realizations, seed, threads=threads, reference=reference
                )
                cells[(algo, SHORT_NAMES[canonical])] = report.r
            except UndefinedCorrelationError as exc:
                logger.warning("%s/%s: %s", algo, measure, exc)
                cells[(algo, SHORT_NAMES[canonical])] = float("nan")
    return cells


def degree_histogram(g: Graph) -> List[Tuple[int, float]]:
    if g.n == 0:
        return []
    values, counts = np.unique(degree_sequence(g), return_counts=True)
    return [(int(k), float(c) / g.n) for k, c in zip(values.tolist(), counts.tolist())]


def _mle_gamma(tail: np.ndarray, k_min: int, method: str) -> float:
    log_sum = float(np.log(tail).sum())
    if method == APPROX:
        return 1.0 + tail.size / (log_sum - tail.size * math.log(k_min - 0.5))
    result = minimize_scalar(
        lambda gamma: gamma * log_sum + tail.size * math.log(zeta(gamma, k_min)),
        bounds=GAMMA_BOUNDS,
        method="bounded",
        options={"xatol": 1e-7},
    )
    return float(result.x)


def _fitted_cdf(values: np.ndarray, gamma: float, k_min: int, method: str) -> np.ndarray:
    if method == APPROX:
        return 1.0 - ((values + 0.5) / (k_min - 0.5)) ** (1.0 - gamma)
    return 1.0 - zeta(gamma, values + 1.0) / zeta(gamma, k_min)


def _ks_distance(tail: np.ndarray, gamma: float, k_min: int, method: str) -> float:
    values, counts = np.unique(tail, return_counts=True)
    empirical = np.cumsum(counts) / tail.size
    fitted = _fitted_cdf(values.astype(float), gamma, k_min, method)
    # between two observed values the empirical CDF is flat while the fitted one keeps rising
    below = np.concatenate(([0.0], empirical[:-1]))
    fitted_below = _fitted_cdf(values.astype(float) - 1.0, gamma, k_min, method)
    return float(max(np.abs(empirical - fitted).max(), np.abs(below - fitted_below).max()))


def _scan(data: np.ndarray, method: str, max_candidates: int) -> Tuple[float, int, float, int]:
    """Best (gamma, k_min, ks, n_tail) over candidate cutoffs by minimum KS distance."""
    distinct = np.unique(data)
    if distinct.size < 2:
        raise DegenerateFitError("power-law fit needs at least two distinct values")
    best: Optional[Tuple[float, int, float, int]] = None
    # the largest value is never a cutoff: its tail would be constant
    for k_min in distinct[:-1][:max_candidates].tolist():
        tail = data[data >= k_min]
        gamma = _mle_gamma(tail, k_min, method)
        ks = _ks_distance(tail, gamma, k_min, method)
        if best is None or ks < best[2]:
            best = (gamma, int(k_min), ks, int(tail.size))
    if best is None:
        raise DegenerateFitError("no usable cutoff for a power-law fit")
    return best


def sample_discrete_power_law(
    gamma: float, k_min: int, size: int, rng: np.random.Generator
) -> np.ndarray:
    """Inverse-CDF draws from ``p_k ~ k^-gamma`` for ``k >= k_min``."""
    support = np.arange(k_min, k_min + SAMPLER_TABLE, dtype=float)
    cdf = 1.0 - zeta(gamma, support + 1.0) / zeta(gamma, k_min)
    u = rng.random(size)
    idx = np.searchsorted(cdf, u, side="left")
    out = k_min + idx.astype(np.int64)
    beyond = idx >= support.size
    if beyond.any():
        approx = np.floor((k_min - 0.5) * (1.0 - u[beyond]) ** (-1.0 / (gamma - 1.0)) + 0.5)
        out[beyond] = np.maximum(approx, k_min + SAMPLER_TABLE).astype(np.int64)
    return out


def _replicate_ks(args: Tuple[np.ndarray, float, int, int, int, int, str, int]) -> Optional[float]:
    data, gamma, k_min, n_tail, seed, index, method, max_candidates = args
    rng = np.random.default_rng([seed, index])
    below = data[data < k_min]
    from_tail = int(rng.binomial(data.size, n_tail / data.size)) if below.size else data.size
    synthetic = np.concatenate(
        (
            rng.choice(below, size=data.size - from_tail) if below.size else np.empty(0, dtype=np.int64),
            sample_discrete_power_law(gamma, k_min, from_tail, rng),
        )
    )
    try:
        return _scan(synthetic, method, max_candidates)[2]
    except DegenerateFitError:
        return None


def fit_power_law(
    degrees: Sequence[int] | np.ndarray,
    bootstraps: int = DEFAULT_BOOTSTRAPS,
    seed: int = 0,
    method: str = DISCRETE,
    max_candidates: int = MAX_KMIN_CANDIDATES,
    threads: Optional[int] = 1,
) -> PowerLawFit:
    """Power-law fit with KS-selected cutoff and a semi-parametric bootstrap p-value."""
    if method not in (DISCRETE, APPROX):
        raise InvalidParameterError(f"unknown fit method {method!r}")
    if bootstraps < 1:
        raise InvalidParameterError("bootstraps must be at least 1")
    data = np.asarray(degrees, dtype=np.int64)
    data = data[data >= 1]
    if data.size < LOW_POWER_SAMPLES:
        logger.warning("power-law fit on %d samples has low power", data.size)
    gamma, k_min, ks, n_tail = _scan(data, method, max_candidates)
    tasks = [(data, gamma, k_min, n_tail, seed, index, method, max_candidates) for index in range(bootstraps)]
    workers = min(resolve_threads(threads), bootstraps)
    if workers <= 1:
        replicate = [_replicate_ks(task) for task in tasks]
    else:
        with Pool(processes=workers) as pool:
            replicate = pool.map(_replicate_ks, tasks)
    valid = [value for value in replicate if value is not None]
    if len(valid) < len(replicate):
        logger.warning("%d degenerate bootstrap replicates skipped", len(replicate) - len(valid))
    if not valid:
        raise DegenerateFitError("every bootstrap replicate was degenerate")
    p_value = sum(1 for value in valid if value >= ks) / len(valid)
    return PowerLawFit(
        gamma=gamma,
        k_min=k_min,
        ks_stat=ks,
        p_value=p_value,
        n_tail=n_tail,
        plausible=p_value >= PLAUSIBILITY_THRESHOLD,
        n_samples=int(data.size),
        bootstraps=len(valid),
        p_value_stderr=math.sqrt(p_value * (1.0 - p_value) / len(valid)),
        method=method,
        low_power=bool(data.size < LOW_POWER_SAMPLES),
    )
