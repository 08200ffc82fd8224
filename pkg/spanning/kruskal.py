from __future__ import annotations

import random
from typing import List, Tuple

from graphs.core import Graph, require_connected
from spanning.disjoint_set import DisjointSet
from spanning.tree import KRUSKAL, SpanningTree, make_tree
from utils.errors import EmptyGraphError


def kruskal(g: Graph, seed: int) -> SpanningTree:
    """Randomized Kruskal: edges in a uniformly random order, merged through a disjoint set."""
    if g.n == 0:
        raise EmptyGraphError("cannot span an empty graph")
    require_connected(g)
    rng = random.Random(seed)
    order = [tuple(edge) for edge in g.edges().tolist()]
    rng.shuffle(order)
    forest = DisjointSet(g.n)
    tree_edges: List[Tuple[int, int]] = []
    for u, v in order:
        if len(tree_edges) == g.n - 1:
            break
        if forest.union(u, v):
            tree_edges.append((u, v))
    return make_tree(g, tree_edges, KRUSKAL, seed, None)
