from __future__ import annotations

import random
from typing import List, Tuple

from graphs.core import Graph, require_connected
from spanning.tree import PRIM, SpanningTree, make_tree
from utils.errors import EmptyGraphError


def prim(g: Graph, seed: int) -> SpanningTree:
    """Randomized Prim on an unweighted graph.

    Frontier edges live in a flat pool; a uniform index is drawn, stale edges
    (far end already in the tree) are swap-removed, and a live edge is taken.
    Each edge enters the pool once, when its first endpoint joins the tree.
    """
    if g.n == 0:
        raise EmptyGraphError("cannot span an empty graph")
    require_connected(g)
    rng = random.Random(seed)
    adjacency = g.adjacency_lists()
    root = rng.randrange(g.n)
    visited = bytearray(g.n)
    visited[root] = 1
    pool: List[Tuple[int, int]] = [(root, j) for j in adjacency[root]]
    tree_edges: List[Tuple[int, int]] = []
    while len(tree_edges) < g.n - 1:
        idx = rng.randrange(len(pool))
        i, j = pool[idx]
        pool[idx] = pool[-1]
        pool.pop()
        if visited[j]:
            continue
        visited[j] = 1
        tree_edges.append((i, j))
        pool.extend((j, w) for w in adjacency[j] if not visited[w])
    return make_tree(g, tree_edges, PRIM, seed, root)
