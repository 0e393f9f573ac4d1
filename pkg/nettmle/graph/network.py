"""Network representation: adjacency, row-normalised operator and neighbourhood sets."""

from collections.abc import Iterable
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np
import pandas as pd
import scipy.sparse as sp
from scipy.linalg import eigvalsh

from ..errors import DataError, GraphError


@dataclass(frozen=True, eq=False)
class AdjacencyGraph:
    """Fixed, symmetric, unweighted network without self-loops or isolated nodes.

    Build instances with :func:`build_graph`; the constructor assumes a validated matrix.
    """

    n_nodes: int
    adjacency: sp.csr_matrix
    degrees: np.ndarray

    @cached_property
    def edges(self) -> set[tuple[int, int]]:
        """Unordered edges as ``(i, j)`` pairs with ``i < j``."""
        upper = sp.triu(self.adjacency, k=1).tocoo()
        return {(int(i), int(j)) for i, j in zip(upper.row, upper.col)}

    @property
    def n_edges(self) -> int:
        return int(self.adjacency.nnz // 2)

    def neighbors(self, node: int) -> np.ndarray:
        start, stop = self.adjacency.indptr[node], self.adjacency.indptr[node + 1]
        return self.adjacency.indices[start:stop]


@dataclass(frozen=True, eq=False)
class RowStochasticW:
    """Row-normalised adjacency ``w_ij = a_ij / n_i``."""

    matrix: sp.csr_matrix

    @property
    def n_nodes(self) -> int:
        return self.matrix.shape[0]

    @cached_property
    def transpose(self) -> sp.csr_matrix:
        return self.matrix.T.tocsr()

    @cached_property
    def eigenvalues(self) -> np.ndarray:
        """Real spectrum of W, computed from the symmetric ``D^{-1/2} A D^{-1/2}``."""
        # w_ij = a_ij / n_i, so sqrt(n_i) w_ij / sqrt(n_j) = a_ij / sqrt(n_i n_j)
        binary = (self.matrix > 0).astype(float)
        degrees = np.asarray(binary.sum(axis=1)).ravel()
        scale = sp.diags(1.0 / np.sqrt(degrees))
        symmetric = (scale @ binary @ scale).toarray()
        return eigvalsh(symmetric)


@dataclass(frozen=True, eq=False)
class NeighborhoodIndex:
    """Per-node neighbour sets ``N_i``, closed sets ``N̄_i`` and two-hop closures ``D_i``."""

    neighbors: tuple[np.ndarray, ...]
    closed: tuple[np.ndarray, ...]
    two_hop: tuple[np.ndarray, ...]

    @property
    def two_hop_sizes(self) -> np.ndarray:
        return np.array([len(d) for d in self.two_hop])


def build_graph(edge_pairs: Iterable[tuple[int, int]], n_nodes: int) -> AdjacencyGraph:
    """Build a validated undirected graph from an edge list.

    Pairs may be listed in one or both directions; duplicates collapse.

    Raises:
        GraphError: self-loop, node id outside ``[0, n_nodes)``, or a node of degree 0
    """
    if n_nodes < 1:
        raise GraphError(f"Graph needs at least one node, got n_nodes={n_nodes}")

    pairs = np.asarray(list(edge_pairs), dtype=np.int64).reshape(-1, 2)
    if pairs.size:
        loops = pairs[:, 0] == pairs[:, 1]
        if loops.any():
            node = int(pairs[loops][0, 0])
            raise GraphError(f"Self-loop on node {node}", node=node)
        bad = (pairs < 0) | (pairs >= n_nodes)
        if bad.any():
            node = int(pairs[bad][0])
            raise GraphError(f"Node id {node} outside [0, {n_nodes})", node=node)

    rows = np.concatenate([pairs[:, 0], pairs[:, 1]])
    cols = np.concatenate([pairs[:, 1], pairs[:, 0]])
    adjacency = sp.coo_matrix((np.ones(rows.size), (rows, cols)), shape=(n_nodes, n_nodes)).tocsr()
    adjacency.sum_duplicates()
    adjacency.data[:] = 1.0
    adjacency.sort_indices()

    degrees = np.diff(adjacency.indptr).astype(np.int64)
    isolated = np.flatnonzero(degrees == 0)
    if isolated.size:
        node = int(isolated[0])
        raise GraphError(f"Isolated node {node} (degree 0); remove it or add an edge", node=node)

    return AdjacencyGraph(n_nodes=n_nodes, adjacency=adjacency, degrees=degrees)


def row_normalize(graph: AdjacencyGraph) -> RowStochasticW:
    """Row-normalise the adjacency matrix; sparsity pattern is preserved."""
    scale = sp.diags(1.0 / graph.degrees.astype(float))
    matrix = (scale @ graph.adjacency).tocsr()
    matrix.sort_indices()
    return RowStochasticW(matrix=matrix)


def neighborhoods(graph: AdjacencyGraph) -> NeighborhoodIndex:
    """Neighbour, closed-neighbour and two-hop index sets for every node."""
    closed_matrix = (graph.adjacency + sp.identity(graph.n_nodes, format="csr")).tocsr()
    # pattern of (A + I)^2 is I ∪ A ∪ A², i.e. N̄_i plus nodes reachable in two steps
    reach = (closed_matrix @ closed_matrix).tocsr()
    reach.sort_indices()
    closed_matrix.sort_indices()

    def rows(matrix: sp.csr_matrix) -> tuple[np.ndarray, ...]:
        return tuple(
            matrix.indices[matrix.indptr[i] : matrix.indptr[i + 1]].copy() for i in range(graph.n_nodes)
        )

    return NeighborhoodIndex(
        neighbors=rows(graph.adjacency),
        closed=rows(closed_matrix),
        two_hop=rows(reach),
    )


def load_edge_list(path: str | Path, n_nodes: int | None = None) -> AdjacencyGraph:
    """Read an ``i,j`` edge CSV with zero-based ids and build the graph.

    Args:
        path: CSV file with header ``i,j``
        n_nodes: Number of nodes; defaults to the largest id plus one

    Raises:
        DataError: missing file, missing columns or non-integer ids
    """
    path = Path(path)
    if not path.exists():
        raise DataError(f"Edge list does not exist: {path}")
    frame = pd.read_csv(path)
    missing = {"i", "j"} - set(frame.columns)
    if missing:
        raise DataError(f"{path}: edge list missing column(s) {sorted(missing)}")

    ids = frame[["i", "j"]].apply(pd.to_numeric, errors="coerce")
    invalid = ids.isna().any(axis=1) | (ids % 1 != 0).any(axis=1)
    if invalid.any():
        row = int(np.flatnonzero(invalid.to_numpy())[0])
        raise DataError(f"{path}: row {row + 2} has a non-integer node id")

    pairs = ids.to_numpy(dtype=np.int64)
    if n_nodes is None:
        n_nodes = int(pairs.max()) + 1 if pairs.size else 0
    return build_graph(map(tuple, pairs), n_nodes)
