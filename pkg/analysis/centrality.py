from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from scipy.sparse.csgraph import shortest_path

from analysis.metrics import csr_from_arrays, map_source_chunks
from graphs.core import Graph, degree_sequence, require_connected
from utils.errors import InvalidParameterError

DEGREE = "degree"
CLOSENESS = "closeness"
BETWEENNESS = "betweenness"

MEASURE_ALIASES = {
    "dc": DEGREE,
    "cc": CLOSENESS,
    "bc": BETWEENNESS,
    DEGREE: DEGREE,
    CLOSENESS: CLOSENESS,
    BETWEENNESS: BETWEENNESS,
}
SHORT_NAMES = {DEGREE: "dc", CLOSENESS: "cc", BETWEENNESS: "bc"}


@dataclass(frozen=True, eq=False)
class CentralityVector:
    measure: str
    values: np.ndarray
    graph_id: str

    def __len__(self) -> int:
        return len(self.values)


def canonical_measure(name: str) -> str:
    try:
        return MEASURE_ALIASES[name]
    except KeyError:
        raise InvalidParameterError(
            f"unknown centrality measure {name!r}; expected one of {sorted(MEASURE_ALIASES)}"
        ) from None


def degree_centrality(g: Graph) -> CentralityVector:
    if g.n < 2:
        raise InvalidParameterError("degree centrality needs at least two nodes")
    values = degree_sequence(g) / (g.n - 1)
    return CentralityVector(DEGREE, values.astype(float), g.fingerprint)


def _reciprocal_sums(task: Tuple[np.ndarray, np.ndarray, np.ndarray]) -> np.ndarray:
    indptr, indices, chunk = task
    rows = shortest_path(
        csr_from_arrays(indptr, indices), method="D", directed=False, unweighted=True, indices=chunk
    )
    rows[np.arange(len(chunk)), chunk] = np.inf
    return (1.0 / rows).sum(axis=1)


def closeness_centrality(g: Graph, threads: Optional[int] = 1) -> CentralityVector:
    """Mean reciprocal distance, ``(1 / (n - 1)) * sum_j 1 / d_ij``."""
    if g.n < 2:
        raise InvalidParameterError("closeness centrality needs at least two nodes")
    require_connected(g)
    parts = map_source_chunks(_reciprocal_sums, g, np.arange(g.n, dtype=np.int64), threads)
    values = np.concatenate(parts) / (g.n - 1)
    return CentralityVector(CLOSENESS, values, g.fingerprint)


def _dependencies(task: Tuple[np.ndarray, np.ndarray, np.ndarray]) -> np.ndarray:
    """Brandes accumulation for one chunk of sources; returns summed dependencies."""
    indptr, indices, chunk = task
    n = len(indptr) - 1
    flat = indices.tolist()
    bounds = indptr.tolist()
    adjacency = [flat[bounds[i] : bounds[i + 1]] for i in range(n)]
    scores = [0.0] * n
    for source in chunk.tolist():
        order: List[int] = []
        preds: List[List[int]] = [[] for _ in range(n)]
        sigma = [0.0] * n
        sigma[source] = 1.0
        dist = [-1] * n
        dist[source] = 0
        queue = deque([source])
        while queue:
            v = queue.popleft()
            order.append(v)
            for w in adjacency[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        delta = [0.0] * n
        while order:
            w = order.pop()
            for v in preds[w]:
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
            if w != source:
                scores[w] += delta[w]
    return np.asarray(scores)


def betweenness_centrality(g: Graph, threads: Optional[int] = 1) -> CentralityVector:
    """Shortest-path betweenness, endpoints excluded, normalized by (n-1)(n-2)/2 pairs."""
    if g.n < 2:
        raise InvalidParameterError("betweenness centrality needs at least two nodes")
    require_connected(g)
    parts = map_source_chunks(_dependencies, g, np.arange(g.n, dtype=np.int64), threads)
    totals = np.sum(parts, axis=0)
    pairs = (g.n - 1) * (g.n - 2)
    # every unordered pair was accumulated from both ends
    values = totals / pairs if pairs else np.zeros(g.n)
    return CentralityVector(BETWEENNESS, values, g.fingerprint)


CENTRALITY: Dict[str, Callable[..., CentralityVector]] = {
    DEGREE: lambda g, threads=1: degree_centrality(g),
    CLOSENESS: closeness_centrality,
    BETWEENNESS: betweenness_centrality,
}


def centrality(g: Graph, measure: str, threads: Optional[int] = 1) -> CentralityVector:
    return CENTRALITY[canonical_measure(measure)](g, threads=threads)
