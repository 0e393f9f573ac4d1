"""Tests for the network representation."""

import networkx as nx
import numpy as np
import pytest

from nettmle.errors import DataError, GraphError
from nettmle.graph import build_graph, gen_block, gen_powerlaw, load_edge_list, neighborhoods, row_normalize
from nettmle.rng import derive_rng


def test_build_graph_path(path_graph):
    assert path_graph.n_nodes == 3
    assert path_graph.n_edges == 2
    np.testing.assert_array_equal(path_graph.degrees, [1, 2, 1])
    assert path_graph.edges == {(0, 1), (1, 2)}


def test_duplicate_and_reversed_pairs_collapse():
    graph = build_graph([(0, 1), (1, 0), (0, 1)], 2)
    assert graph.n_edges == 1
    assert graph.adjacency.max() == 1.0


def test_adjacency_is_symmetric(block_graph):
    assert (block_graph.adjacency != block_graph.adjacency.T).nnz == 0
    assert block_graph.adjacency.diagonal().sum() == 0


def test_self_loop_rejected():
    with pytest.raises(GraphError) as info:
        build_graph([(0, 1), (2, 2)], 3)
    assert info.value.node == 2


def test_out_of_range_id_rejected():
    with pytest.raises(GraphError):
        build_graph([(0, 3)], 3)


def test_isolated_node_rejected():
    with pytest.raises(GraphError) as info:
        build_graph([(0, 1)], 3)
    assert info.value.node == 2
    assert isinstance(info.value, DataError)


def test_row_normalize(path_graph):
    W = row_normalize(path_graph)
    np.testing.assert_allclose(np.asarray(W.matrix.sum(axis=1)).ravel(), 1.0)
    np.testing.assert_allclose(W.matrix.toarray()[1], [0.5, 0.0, 0.5])


def test_row_normalize_preserves_pattern(block_graph):
    W = row_normalize(block_graph)
    assert W.matrix.nnz == block_graph.adjacency.nnz


def test_eigenvalues_of_path(path_graph):
    np.testing.assert_allclose(np.sort(row_normalize(path_graph).eigenvalues), [-1.0, 0.0, 1.0], atol=1e-12)


def test_eigenvalues_lie_in_unit_interval(block_graph):
    eigenvalues = row_normalize(block_graph).eigenvalues
    assert eigenvalues.max() == pytest.approx(1.0)
    assert eigenvalues.min() >= -1.0 - 1e-12


def test_neighborhoods_path(path_graph):
    index = neighborhoods(path_graph)
    np.testing.assert_array_equal(index.neighbors[0], [1])
    np.testing.assert_array_equal(index.closed[0], [0, 1])
    np.testing.assert_array_equal(index.two_hop[0], [0, 1, 2])
    np.testing.assert_array_equal(index.two_hop_sizes, [3, 3, 3])


def test_two_hop_ring(ring_graph):
    index = neighborhoods(ring_graph)
    np.testing.assert_array_equal(index.two_hop[0], [0, 1, 2, 8, 9])


def test_load_edge_list(tmp_path):
    path = tmp_path / "edges.csv"
    path.write_text("i,j\n0,1\n1,2\n")
    graph = load_edge_list(path)
    assert graph.n_nodes == 3
    assert graph.edges == {(0, 1), (1, 2)}


def test_load_edge_list_bad_id(tmp_path):
    path = tmp_path / "edges.csv"
    path.write_text("i,j\n0,1\n1,x\n")
    with pytest.raises(DataError, match="row 3"):
        load_edge_list(path)


def test_load_edge_list_missing_file(tmp_path):
    with pytest.raises(DataError):
        load_edge_list(tmp_path / "nope.csv")


def brute_force_two_hop(graph, i):
    g = nx.Graph(list(graph.edges))
    g.add_nodes_from(range(graph.n_nodes))
    return sorted(nx.single_source_shortest_path_length(g, i, cutoff=2))


@pytest.mark.parametrize("seed", range(5))
def test_two_hop_sets_match_breadth_first_search(seed):
    rng = derive_rng(seed, "two-hop")
    n = int(rng.integers(10, 101))
    if seed % 2:
        graph = gen_block(n, int(rng.integers(1, 5)), 0.2, 0.02, rng)
    else:
        graph = gen_powerlaw(n, int(rng.integers(1, 4)), rng)
    index = neighborhoods(graph)
    for i in range(n):
        np.testing.assert_array_equal(index.two_hop[i], brute_force_two_hop(graph, i))
        np.testing.assert_array_equal(index.closed[i], sorted([i, *graph.neighbors(i)]))
