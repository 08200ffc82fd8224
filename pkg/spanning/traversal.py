from __future__ import annotations

import random
from collections import deque
from typing import List, Tuple

from graphs.core import Graph, require_connected
from spanning.tree import BFS, DFS, SpanningTree, make_tree
from utils.errors import EmptyGraphError


def _shuffled_adjacency(g: Graph, rng: random.Random) -> List[List[int]]:
    return [rng.sample(neighbors, len(neighbors)) for neighbors in g.adjacency_lists()]


def _prepare(g: Graph, seed: int) -> Tuple[random.Random, int, List[List[int]]]:
    if g.n == 0:
        raise EmptyGraphError("cannot span an empty graph")
    require_connected(g)
    rng = random.Random(seed)
    root = rng.randrange(g.n)
    return rng, root, _shuffled_adjacency(g, rng)


def bfs_tree(g: Graph, seed: int) -> SpanningTree:
    """Breadth-first tree from a random root; each node's tree depth is its graph distance to the root."""
    _, root, adjacency = _prepare(g, seed)
    visited = bytearray(g.n)
    visited[root] = 1
    queue = deque([root])
    tree_edges: List[Tuple[int, int]] = []
    while queue:
        i = queue.popleft()
        for j in adjacency[i]:
            if not visited[j]:
                visited[j] = 1
                tree_edges.append((i, j))
                queue.append(j)
    return make_tree(g, tree_edges, BFS, seed, root)


def dfs_tree(g: Graph, seed: int) -> SpanningTree:
    """Depth-first (preorder) tree from a random root.

    A node is claimed when popped, by the most recently visited neighbor that
    pushed it, so every non-tree edge joins an ancestor and a descendant.
    """
    _, root, adjacency = _prepare(g, seed)
    visited = bytearray(g.n)
    stack: List[Tuple[int, int]] = [(root, -1)]
    tree_edges: List[Tuple[int, int]] = []
    while stack:
        node, via = stack.pop()
        if visited[node]:
            continue
        visited[node] = 1
        if via >= 0:
            tree_edges.append((via, node))
        for j in reversed(adjacency[node]):
            if not visited[j]:
                stack.append((j, node))
    return make_tree(g, tree_edges, DFS, seed, root)
