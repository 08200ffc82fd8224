from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np

from graphs.core import Graph, connected_components, from_edges
from spanning.disjoint_set import DisjointSet
from utils.errors import InvalidParameterError

PRIM = "prim"
KRUSKAL = "kruskal"
BFS = "bfs"
DFS = "dfs"
TREE_ALGORITHMS = (PRIM, KRUSKAL, BFS, DFS)

PASS = "pass"
NODE_COUNT_VIOLATION = "node-count violation"
EDGE_COUNT_VIOLATION = "edge-count violation"
EDGE_SUBSET_VIOLATION = "edge-subset violation"
CONNECTIVITY_VIOLATION = "connectivity violation"
CYCLE_VIOLATION = "cycle violation"
AVERAGE_DEGREE_VIOLATION = "average-degree violation"


@dataclass(frozen=True)
class SpanningTree:
    tree: Graph
    parent_graph_id: str
    algorithm: str
    seed: int
    root: Optional[int] = None

    def summary(self) -> Dict[str, object]:
        return {
            "algorithm": self.algorithm,
            "seed": self.seed,
            "root": self.root,
            "n": self.tree.n,
            "m": self.tree.m,
        }


def make_tree(g: Graph, edges: List[Tuple[int, int]], algorithm: str, seed: int, root: Optional[int]) -> SpanningTree:
    return SpanningTree(
        tree=from_edges(g.n, edges),
        parent_graph_id=g.fingerprint,
        algorithm=algorithm,
        seed=seed,
        root=root,
    )


def verify_spanning_tree(g: Graph, t: SpanningTree) -> str:
    """First violated spanning-tree invariant, or ``PASS``."""
    tree = t.tree
    n = g.n
    if tree.n != n:
        return NODE_COUNT_VIOLATION
    if tree.m != n - 1:
        return EDGE_COUNT_VIOLATION
    edges = tree.edges().tolist()
    if any(not g.has_edge(u, v) for u, v in edges):
        return EDGE_SUBSET_VIOLATION
    if n > 1:
        count, _ = connected_components(tree)
        if count != 1:
            return CONNECTIVITY_VIOLATION
    forest = DisjointSet(n)
    if not all(forest.union(u, v) for u, v in edges):
        return CYCLE_VIOLATION
    if n and Fraction(2 * tree.m, n) != 2 - Fraction(2, n):
        return AVERAGE_DEGREE_VIOLATION
    return PASS


def _levels_from_root(t: SpanningTree) -> Tuple[np.ndarray, np.ndarray]:
    if t.root is None:
        raise InvalidParameterError(f"{t.algorithm} trees have no root")
    adjacency = t.tree.adjacency_lists()
    n = t.tree.n
    parent = np.full(n, -1, dtype=np.int64)
    depth = np.full(n, -1, dtype=np.int64)
    depth[t.root] = 0
    queue = deque([t.root])
    while queue:
        node = queue.popleft()
        for child in adjacency[node]:
            if depth[child] < 0:
                depth[child] = depth[node] + 1
                parent[child] = node
                queue.append(child)
    return parent, depth


def parent_array(t: SpanningTree) -> np.ndarray:
    """Parent of every node with the tree hung from its root; the root maps to -1."""
    parent, _ = _levels_from_root(t)
    return parent


def node_depths(t: SpanningTree) -> np.ndarray:
    _, depth = _levels_from_root(t)
    return depth


def tree_depth(t: SpanningTree) -> int:
    return int(node_depths(t).max())
