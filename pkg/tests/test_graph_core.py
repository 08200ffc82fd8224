import numpy as np
import pytest

from graphs.core import (
    connected_components,
    degree_sequence,
    from_edges,
    induced_subgraph,
    is_connected,
    largest_component_nodes,
    largest_connected_component,
    read_graph,
    require_connected,
    write_graph,
)
from utils.errors import DisconnectedGraphError, EmptyGraphError, InvalidParameterError


def test_from_edges_builds_sorted_symmetric_adjacency():
    g = from_edges(4, [(2, 0), (0, 1), (3, 2)])
    assert g.n == 4
    assert g.m == 3
    assert g.neighbors(0).tolist() == [1, 2]
    assert g.neighbors(2).tolist() == [0, 3]
    assert g.adjacency_lists() == [[1, 2], [0], [0, 3], [2]]
    assert g.k_avg == pytest.approx(1.5)


def test_from_edges_drops_loops_and_merges_parallel_edges():
    g = from_edges(3, [(0, 1), (1, 0), (0, 1), (2, 2), (1, 2)])
    assert g.m == 2
    assert degree_sequence(g).tolist() == [1, 2, 1]


def test_from_edges_rejects_out_of_range_endpoints():
    with pytest.raises(InvalidParameterError):
        from_edges(2, [(0, 2)])


def test_empty_graph_has_no_nodes():
    g = from_edges(0, [])
    assert g.n == 0 and g.m == 0
    with pytest.raises(EmptyGraphError):
        connected_components(g)


def test_edges_are_canonical(k4):
    assert k4.edges().tolist() == [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]]


def test_has_edge(path5):
    assert path5.has_edge(1, 2)
    assert path5.has_edge(2, 1)
    assert not path5.has_edge(0, 2)
    assert not path5.has_edge(4, 0)


def test_graph_arrays_are_read_only(triangle):
    with pytest.raises(ValueError):
        triangle.indices[0] = 2


def test_equal_graphs_share_fingerprint():
    a = from_edges(3, [(0, 1), (1, 2)])
    b = from_edges(3, [(2, 1), (1, 0), (0, 1)])
    assert a == b
    assert a.fingerprint == b.fingerprint
    assert a.fingerprint != from_edges(3, [(0, 1), (0, 2)]).fingerprint


def test_components(two_components):
    count, labels = connected_components(two_components)
    assert count == 2
    assert labels[0] == labels[1]
    assert labels[2] == labels[3] == labels[4]
    assert not is_connected(two_components)


def test_require_connected_names_an_unreachable_node(two_components):
    with pytest.raises(DisconnectedGraphError) as info:
        require_connected(two_components)
    assert info.value.node == 2


def test_largest_component_is_relabelled_densely(two_components):
    lcc = largest_connected_component(two_components)
    assert lcc.n == 3
    assert lcc.edges().tolist() == [[0, 1], [1, 2]]


def test_equal_sized_components_go_to_the_smallest_member():
    g = from_edges(4, [(2, 3), (0, 1)])
    assert largest_component_nodes(g).tolist() == [0, 1]


def test_connected_graph_is_its_own_largest_component(k4):
    assert largest_connected_component(k4) is k4


def test_induced_subgraph_follows_node_order(k4):
    sub = induced_subgraph(k4, [1, 3, 2])
    assert sub.n == 3
    assert sub.m == 3


def test_read_graph_with_lcc_keeps_matching_labels(tmp_path):
    path = tmp_path / "g.txt"
    path.write_text("x y\na b\nb c\nc a\n", encoding="utf-8")
    g, labels = read_graph(path, lcc=True)
    assert g.n == 3
    assert labels == ["a", "b", "c"]


def test_write_graph_uses_labels(tmp_path, path5):
    target = tmp_path / "out.txt"
    write_graph(path5, target, labels=list("abcde"), header="h")
    assert target.read_text(encoding="utf-8") == "# h\na b\nb c\nc d\nd e\n"
    g, labels = read_graph(target)
    assert g == path5
    assert labels == list("abcde")


def test_degree_sequence_sums_to_twice_edges(k5):
    assert int(np.sum(degree_sequence(k5))) == 2 * k5.m


def test_largest_component_of_two_triangles_and_a_tail():
    g = from_edges(7, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (5, 6)])
    lcc = largest_connected_component(g)
    assert (lcc.n, lcc.m) == (4, 4)
    assert sorted(degree_sequence(lcc).tolist()) == [1, 2, 2, 3]


def test_largest_component_is_idempotent(two_components):
    once = largest_connected_component(two_components)
    assert largest_connected_component(once) == once
