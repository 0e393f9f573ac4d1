"""Node-level data bound to a network, and the neighbour summary functions."""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from ..errors import DataError
from ..graph import AdjacencyGraph


def aggregation_operator(graph: AdjacencyGraph, summary: str = "mean") -> sp.csr_matrix:
    """Sparse ``N x N`` matrix mapping node values to neighbour means (or sums)."""
    if summary == "mean":
        return sp.csr_matrix(sp.diags(1.0 / graph.degrees.astype(float)) @ graph.adjacency)
    if summary == "sum":
        return sp.csr_matrix(graph.adjacency)
    raise ValueError(f"Unknown summary '{summary}', expected 'mean' or 'sum'")


def neighbor_aggregate(graph: AdjacencyGraph, values: np.ndarray, summary: str = "mean") -> np.ndarray:
    """Aggregate ``values`` over each node's neighbours.

    Args:
        graph: Network
        values: Shape ``(N,)`` or ``(..., N, k)``; the node axis is the last for 1-D input
            and the second-to-last otherwise
        summary: ``"mean"`` (``n_i^{-1} sum_j a_ij v_j``) or ``"sum"``

    Returns:
        Array of the same shape as ``values``
    """
    operator = aggregation_operator(graph, summary)
    values = np.asarray(values, dtype=float)
    if values.ndim == 1:
        return operator @ values

    moved = np.moveaxis(values, -2, 0)
    flat = moved.reshape(moved.shape[0], -1)
    aggregated = (operator @ flat).reshape(moved.shape)
    return np.moveaxis(aggregated, 0, -2)


def summarize_x(x: np.ndarray, graph: AdjacencyGraph, summary: str = "mean") -> np.ndarray:
    """Covariate summaries ``C_i = (X_i, aggregate_{j in N_i} X_j)``.

    ``x`` has shape ``(..., N, p)``; the result has shape ``(..., N, 2p)``.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim < 2 or x.shape[-2] != graph.n_nodes:
        raise DataError(f"x must have shape (..., {graph.n_nodes}, p), got {x.shape}")
    return np.concatenate([x, neighbor_aggregate(graph, x, summary)], axis=-1)


def summarize_z(z: np.ndarray, graph: AdjacencyGraph, summary: str = "mean") -> np.ndarray:
    """Treatment summaries ``V_i = (Z_i, aggregate_{j in N_i} Z_j)``.

    ``z`` has shape ``(..., N)``; the result has shape ``(..., N, 2)``.
    """
    z = np.asarray(z, dtype=float)
    if z.shape[-1] != graph.n_nodes:
        raise DataError(f"z must have {graph.n_nodes} entries on its last axis, got shape {z.shape}")
    return summarize_x(z[..., None], graph, summary)


@dataclass(frozen=True, eq=False)
class Dataset:
    """Observed ``(Y, Z, X)`` per node with derived summaries ``V`` and ``C``."""

    y: np.ndarray
    z: np.ndarray
    x: np.ndarray
    v: np.ndarray
    c: np.ndarray
    graph: AdjacencyGraph
    summary: str = "mean"

    @classmethod
    def from_arrays(
        cls,
        y: np.ndarray,
        z: np.ndarray,
        x: np.ndarray,
        graph: AdjacencyGraph,
        summary: str = "mean",
    ) -> "Dataset":
        """Bind arrays to ``graph`` and compute the summaries."""
        y = np.asarray(y, dtype=float)
        z = np.asarray(z, dtype=float)
        x = np.asarray(x, dtype=float)
        if x.ndim == 1:
            x = x[:, None]
        n = graph.n_nodes
        if y.shape != (n,) or z.shape != (n,) or x.shape[0] != n:
            raise DataError(f"y, z, x must have {n} rows, got shapes {y.shape}, {z.shape}, {x.shape}")
        return cls(
            y=y,
            z=z,
            x=x,
            v=summarize_z(z, graph, summary),
            c=summarize_x(x, graph, summary),
            graph=graph,
            summary=summary,
        )

    @property
    def n_nodes(self) -> int:
        return self.graph.n_nodes

    @property
    def x_dim(self) -> int:
        return self.x.shape[1]
