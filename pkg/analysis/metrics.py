from __future__ import annotations

import logging
import math
import os
from collections import deque
from dataclasses import asdict, dataclass
from multiprocessing import Pool
from typing import Callable, Dict, List, Optional, Sequence, Tuple, TypeVar

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import shortest_path

from graphs.core import Graph, require_connected
from utils.errors import DisconnectedGraphError, InvalidParameterError

logger = logging.getLogger(__name__)

EXACT = "exact"
SAMPLED = "sampled"
AUTO = "auto"
EXACT_NODE_LIMIT = 2**14
DEFAULT_SOURCES = 256
CHUNK_SIZE = 128

T = TypeVar("T")


@dataclass(frozen=True)
class DistanceStats:
    d_avg: float
    d_max: int
    d_std: float
    c_d: float
    mode: str
    n_pairs: int
    sources: Optional[int] = None

    @property
    def d_max_is_lower_bound(self) -> bool:
        return self.mode == SAMPLED

    def to_dict(self) -> Dict[str, object]:
        out = asdict(self)
        out["d_max_is_lower_bound"] = self.d_max_is_lower_bound
        return out


def resolve_threads(threads: Optional[int]) -> int:
    if threads is None or threads <= 0:
        return os.cpu_count() or 1
    return threads


def csr_from_arrays(indptr: np.ndarray, indices: np.ndarray) -> sp.csr_matrix:
    n = len(indptr) - 1
    return sp.csr_matrix((np.ones(len(indices), dtype=np.int8), indices, indptr), shape=(n, n))


def distance_rows(g: Graph, sources: Sequence[int] | np.ndarray) -> np.ndarray:
    """Hop distances from each source to every node, ``inf`` where unreachable."""
    return shortest_path(g.to_csr(), method="D", directed=False, unweighted=True, indices=np.asarray(sources))


# graph arrays installed once per pool process; tasks carry only source chunks
_shared: Dict[str, object] = {}


def _install_graph(worker: Callable, indptr: np.ndarray, indices: np.ndarray) -> None:
    _shared["worker"] = worker
    _shared["indptr"] = indptr
    _shared["indices"] = indices


def _run_chunk(chunk: np.ndarray):
    return _shared["worker"]((_shared["indptr"], _shared["indices"], chunk))


def map_source_chunks(
    worker: Callable[[Tuple[np.ndarray, np.ndarray, np.ndarray]], T],
    g: Graph,
    sources: np.ndarray,
    threads: Optional[int] = 1,
) -> List[T]:
    """Run ``worker`` over fixed-size chunks of ``sources``; results come back in chunk order."""
    chunks = [sources[start : start + CHUNK_SIZE] for start in range(0, len(sources), CHUNK_SIZE)]
    workers = min(resolve_threads(threads), len(chunks))
    if workers <= 1:
        return [worker((g.indptr, g.indices, chunk)) for chunk in chunks]
    with Pool(processes=workers, initializer=_install_graph, initargs=(worker, g.indptr, g.indices)) as pool:
        return pool.map(_run_chunk, chunks)


def _distance_sums(task: Tuple[np.ndarray, np.ndarray, np.ndarray]) -> Tuple[int, int, int, int]:
    indptr, indices, chunk = task
    rows = shortest_path(
        csr_from_arrays(indptr, indices), method="D", directed=False, unweighted=True, indices=chunk
    )
    if np.isinf(rows).any():
        raise DisconnectedGraphError("graph is disconnected: some pair has no path")
    hops = rows.astype(np.uint32)
    # the zero at each source's own column adds nothing to the sums
    total = int(hops.sum(dtype=np.int64))
    total_sq = int(np.square(hops, dtype=np.int64).sum(dtype=np.int64))
    return total, total_sq, int(hops.max()), len(chunk) * (rows.shape[1] - 1)


def _stats_from_sums(sums: List[Tuple[int, int, int, int]], mode: str, n_pairs: int, sources: Optional[int]) -> DistanceStats:
    total = sum(part[0] for part in sums)
    total_sq = sum(part[1] for part in sums)
    d_max = max(part[2] for part in sums)
    count = sum(part[3] for part in sums)
    d_avg = total / count
    variance = (count * total_sq - total * total) / (count * count)
    d_std = math.sqrt(max(variance, 0.0))
    return DistanceStats(
        d_avg=d_avg,
        d_max=d_max,
        d_std=d_std,
        c_d=d_std / d_avg,
        mode=mode,
        n_pairs=n_pairs,
        sources=sources,
    )


def _require_pairs(g: Graph) -> None:
    if g.n < 2:
        raise InvalidParameterError("distance statistics need at least two nodes")
    require_connected(g)


def sssp_bfs(g: Graph, source: int) -> np.ndarray:
    if not 0 <= source < g.n:
        raise InvalidParameterError(f"source {source} outside 0..{g.n - 1}")
    adjacency = g.adjacency_lists()
    dist = np.full(g.n, np.inf)
    dist[source] = 0
    queue = deque([source])
    while queue:
        node = queue.popleft()
        step = dist[node] + 1
        for other in adjacency[node]:
            if dist[other] == np.inf:
                dist[other] = step
                queue.append(other)
    return dist


def distance_stats_exact(g: Graph, threads: Optional[int] = 1) -> DistanceStats:
    """All-pairs statistics; ``d_std`` is the population deviation over the n(n-1)/2 pairs."""
    _require_pairs(g)
    sums = map_source_chunks(_distance_sums, g, np.arange(g.n, dtype=np.int64), threads)
    return _stats_from_sums(sums, EXACT, g.n * (g.n - 1) // 2, None)


def distance_stats_sampled(
    g: Graph, sources: int, seed: Optional[int], threads: Optional[int] = 1
) -> DistanceStats:
    """Statistics over (source, other) pairs for a uniform random set of sources.

    ``d_max`` is the largest eccentricity seen, so only a lower bound of the diameter.
    """
    if sources < 1:
        raise InvalidParameterError("sampled distances need at least one source")
    if sources > g.n:
        raise InvalidParameterError(f"cannot sample {sources} sources from {g.n} nodes")
    _require_pairs(g)
    rng = np.random.default_rng(seed)
    chosen = np.sort(rng.choice(g.n, size=sources, replace=False)).astype(np.int64)
    sums = map_source_chunks(_distance_sums, g, chosen, threads)
    return _stats_from_sums(sums, SAMPLED, sources * (g.n - 1), sources)


def distance_stats(
    g: Graph,
    mode: str = AUTO,
    sources: int = DEFAULT_SOURCES,
    seed: Optional[int] = None,
    threads: Optional[int] = 1,
) -> DistanceStats:
    if mode == AUTO:
        mode = EXACT if g.n <= EXACT_NODE_LIMIT else SAMPLED
    if mode == EXACT:
        return distance_stats_exact(g, threads)
    if mode == SAMPLED:
        return distance_stats_sampled(g, min(sources, g.n), seed, threads)
    raise InvalidParameterError(f"unknown metric mode {mode!r}")


def eccentricity(g: Graph, node: int) -> int:
    dist = sssp_bfs(g, node)
    if np.isinf(dist).any():
        raise DisconnectedGraphError(f"node {node} does not reach every node", node=node)
    return int(dist.max())


def diameter(g: Graph, threads: Optional[int] = 1) -> int:
    return distance_stats_exact(g, threads).d_max


def average_clustering(g: Graph) -> float:
    """Mean local clustering coefficient; nodes of degree < 2 count as 0."""
    if g.n == 0:
        return 0.0
    neighbor_sets = [set(neighbors) for neighbors in g.adjacency_lists()]
    total = 0.0
    for neighbors in neighbor_sets:
        k = len(neighbors)
        if k < 2:
            continue
        links = sum(len(neighbor_sets[u] & neighbors) for u in neighbors) // 2
        total += 2.0 * links / (k * (k - 1))
    return total / g.n


def random_graph_diameter_estimate(n: int, k_avg: float) -> float:
    if k_avg <= 1:
        raise InvalidParameterError("the log n / log k estimate needs k_avg > 1")
    return math.log(n) / math.log(k_avg)


def lattice_distance_estimate(n: int) -> float:
    return math.sqrt(n)


def scaling_slope(ns: Sequence[float], values: Sequence[float], scale: str = "loglog") -> float:
    """Least-squares slope of ``values`` against ``log n`` (``semilog``) or log-log (``loglog``)."""
    x = np.log(np.asarray(ns, dtype=float))
    y = np.asarray(values, dtype=float)
    if scale == "loglog":
        y = np.log(y)
    elif scale != "semilog":
        raise InvalidParameterError(f"unknown scale {scale!r}")
    if len(x) < 2:
        raise InvalidParameterError("a slope needs at least two points")
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)
