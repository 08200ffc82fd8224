from __future__ import annotations

from typing import Callable, Dict

from graphs.core import Graph
from spanning.kruskal import kruskal
from spanning.prim import prim
from spanning.traversal import bfs_tree, dfs_tree
from spanning.tree import BFS, DFS, KRUSKAL, PRIM, SpanningTree
from utils.errors import InvalidParameterError

ALGORITHMS: Dict[str, Callable[[Graph, int], SpanningTree]] = {
    PRIM: prim,
    KRUSKAL: kruskal,
    BFS: bfs_tree,
    DFS: dfs_tree,
}


def build_tree(name: str, g: Graph, seed: int) -> SpanningTree:
    try:
        runner = ALGORITHMS[name]
    except KeyError:
        raise InvalidParameterError(
            f"unknown tree algorithm {name!r}; expected one of {sorted(ALGORITHMS)}"
        ) from None
    return runner(g, seed)
