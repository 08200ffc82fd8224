from __future__ import annotations

import itertools

import networkx as nx
import pytest

from graphs.core import Graph, from_edges


def to_networkx(g: Graph) -> nx.Graph:
    out = nx.Graph()
    out.add_nodes_from(range(g.n))
    out.add_edges_from(map(tuple, g.edges().tolist()))
    return out


def from_networkx(h: nx.Graph) -> Graph:
    mapping = {node: idx for idx, node in enumerate(sorted(h.nodes()))}
    return from_edges(len(mapping), [(mapping[u], mapping[v]) for u, v in h.edges()])


@pytest.fixture
def path5() -> Graph:
    return from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4)])


@pytest.fixture
def star6() -> Graph:
    # center 0 with five leaves
    return from_edges(6, [(0, leaf) for leaf in range(1, 6)])


@pytest.fixture
def triangle() -> Graph:
    return from_edges(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def cycle4() -> Graph:
    return from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])


@pytest.fixture
def k4() -> Graph:
    return from_edges(4, list(itertools.combinations(range(4), 2)))


@pytest.fixture
def k5() -> Graph:
    return from_edges(5, list(itertools.combinations(range(5), 2)))


@pytest.fixture
def two_components() -> Graph:
    return from_edges(5, [(0, 1), (2, 3), (3, 4)])
