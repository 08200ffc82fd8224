from __future__ import annotations

import hashlib
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components as _csgraph_components

from utils.edge_list import EdgeList, format_edge_list, parse_edge_file
from utils.errors import DisconnectedGraphError, EmptyGraphError, GraphError, InvalidParameterError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable undirected simple graph on nodes ``0..n-1``.

    Adjacency is stored CSR-style: the neighbors of ``i`` are
    ``indices[indptr[i]:indptr[i + 1]]``, sorted ascending.
    """

    indptr: np.ndarray
    indices: np.ndarray

    def __post_init__(self) -> None:
        self.indptr.flags.writeable = False
        self.indices.flags.writeable = False

    @property
    def n(self) -> int:
        return len(self.indptr) - 1

    @property
    def m(self) -> int:
        return len(self.indices) // 2

    @property
    def k_avg(self) -> float:
        return 2.0 * self.m / self.n if self.n else 0.0

    def neighbors(self, node: int) -> np.ndarray:
        return self.indices[self.indptr[node] : self.indptr[node + 1]]

    def degree(self, node: int) -> int:
        return int(self.indptr[node + 1] - self.indptr[node])

    def adjacency_lists(self) -> List[List[int]]:
        flat = self.indices.tolist()
        bounds = self.indptr.tolist()
        return [flat[bounds[i] : bounds[i + 1]] for i in range(self.n)]

    def edges(self) -> np.ndarray:
        """All edges as an ``(m, 2)`` array with ``u < v``, sorted lexicographically."""
        rows = np.repeat(np.arange(self.n, dtype=np.int64), np.diff(self.indptr))
        mask = rows < self.indices
        return np.column_stack((rows[mask], self.indices[mask]))

    def has_edge(self, u: int, v: int) -> bool:
        row = self.neighbors(u)
        pos = int(np.searchsorted(row, v))
        return pos < len(row) and int(row[pos]) == v

    def to_csr(self) -> sp.csr_matrix:
        data = np.ones(len(self.indices), dtype=np.int8)
        return sp.csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))

    @property
    def fingerprint(self) -> str:
        digest = hashlib.blake2b(digest_size=8)
        digest.update(np.int64(self.n).tobytes())
        digest.update(np.ascontiguousarray(self.indices, dtype=np.int64).tobytes())
        return digest.hexdigest()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return np.array_equal(self.indptr, other.indptr) and np.array_equal(self.indices, other.indices)

    def __hash__(self) -> int:
        return hash(self.fingerprint)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def _check_invariants(g: Graph) -> None:
    degrees = np.diff(g.indptr)
    if int(degrees.sum()) != 2 * g.m:
        raise GraphError("degree sum does not equal 2m")
    if g.m:
        csr = g.to_csr()
        if csr.diagonal().any():
            raise GraphError("self-loop in simple graph")
        if (csr != csr.T).nnz:
            raise GraphError("adjacency is not symmetric")


def from_edges(n: int, edges: Iterable[Tuple[int, int]] | np.ndarray) -> Graph:
    """Simple graph on ``n`` nodes; self-loops are dropped and parallel edges merged."""
    if n < 0:
        raise InvalidParameterError("node count must be non-negative")
    arr = np.asarray(edges if isinstance(edges, np.ndarray) else list(edges), dtype=np.int64).reshape(-1, 2)
    if arr.size and (arr.min() < 0 or arr.max() >= n):
        raise InvalidParameterError(f"edge endpoint outside 0..{n - 1}")
    if n == 0:
        return Graph(indptr=np.zeros(1, dtype=np.int64), indices=np.zeros(0, dtype=np.int64))
    u, v = arr[:, 0], arr[:, 1]
    keep = u != v
    u, v = u[keep], v[keep]
    rows = np.concatenate((u, v))
    cols = np.concatenate((v, u))
    adjacency = sp.coo_matrix(
        (np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n, n)
    ).tocsr()
    adjacency.sum_duplicates()
    adjacency.sort_indices()
    g = Graph(
        indptr=adjacency.indptr.astype(np.int64),
        indices=adjacency.indices.astype(np.int64),
    )
    _check_invariants(g)
    return g


def simplify(edge_list: EdgeList) -> Graph:
    return from_edges(edge_list.num_nodes, edge_list.edges)


def degree_sequence(g: Graph) -> np.ndarray:
    return np.diff(g.indptr)


def connected_components(g: Graph) -> Tuple[int, np.ndarray]:
    if g.n == 0:
        raise EmptyGraphError("graph has no nodes")
    count, labels = _csgraph_components(g.to_csr(), directed=False, return_labels=True)
    return int(count), labels


def is_connected(g: Graph) -> bool:
    if g.n <= 1:
        return g.n == 1
    count, _ = connected_components(g)
    return count == 1


def require_connected(g: Graph) -> None:
    count, labels = connected_components(g)
    if count > 1:
        node = int(np.flatnonzero(labels != labels[0])[0])
        raise DisconnectedGraphError(
            f"graph is disconnected: node {node} is unreachable from node 0 ({count} components)",
            node=node,
        )


def induced_subgraph(g: Graph, nodes: Sequence[int] | np.ndarray) -> Graph:
    """Subgraph on ``nodes``; the i-th entry of ``nodes`` becomes node i."""
    idx = np.asarray(nodes, dtype=np.int64)
    sub = g.to_csr()[idx][:, idx].tocsr()
    sub.sum_duplicates()
    sub.sort_indices()
    out = Graph(indptr=sub.indptr.astype(np.int64), indices=sub.indices.astype(np.int64))
    _check_invariants(out)
    return out


def largest_component_nodes(g: Graph) -> np.ndarray:
    """Sorted node ids of the largest component; equal sizes go to the smallest member id."""
    count, labels = connected_components(g)
    if count == 1:
        return np.arange(g.n, dtype=np.int64)
    sizes = np.bincount(labels, minlength=count)
    first = np.full(count, g.n, dtype=np.int64)
    np.minimum.at(first, labels, np.arange(g.n, dtype=np.int64))
    best = max(range(count), key=lambda c: (int(sizes[c]), -int(first[c])))
    return np.flatnonzero(labels == best).astype(np.int64)


def largest_connected_component(g: Graph) -> Graph:
    nodes = largest_component_nodes(g)
    if len(nodes) == g.n:
        return g
    logger.debug("largest component keeps %d of %d nodes", len(nodes), g.n)
    return induced_subgraph(g, nodes)


def read_graph(source: str | Path, lcc: bool = False) -> Tuple[Graph, List[str]]:
    """Parse, simplify and optionally reduce to the LCC; returns the graph and its node labels."""
    edge_list = parse_edge_file(source)
    g = simplify(edge_list)
    labels = edge_list.labels
    if lcc:
        nodes = largest_component_nodes(g)
        if len(nodes) != g.n:
            logger.info("%s: keeping largest component, %d of %d nodes", source, len(nodes), g.n)
            g = induced_subgraph(g, nodes)
            labels = [labels[i] for i in nodes.tolist()]
    return g, labels


def write_graph(
    g: Graph,
    target: str | Path,
    labels: Optional[Sequence[str]] = None,
    header: Optional[str] = None,
) -> None:
    text = format_edge_list(map(tuple, g.edges().tolist()), labels=labels, header=header)
    if str(target) == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    Path(target).write_text(text, encoding="utf-8")
