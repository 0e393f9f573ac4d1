"""Random network generators (stochastic block model, preferential attachment)."""

import logging

import networkx as nx
import numpy as np

from ..errors import ParameterError
from .network import AdjacencyGraph, build_graph

logger = logging.getLogger(__name__)


def _nx_seed(rng: np.random.Generator) -> int:
    return int(rng.integers(0, 2**32 - 1))


def block_sizes(n_nodes: int, n_blocks: int) -> list[int]:
    """Near-equal block sizes summing to ``n_nodes``."""
    return [len(block) for block in np.array_split(np.arange(n_nodes), n_blocks)]


def gen_block(
    n_nodes: int,
    n_blocks: int,
    p_in: float,
    p_out: float,
    rng: np.random.Generator,
) -> AdjacencyGraph:
    """Stochastic block model draw with isolated nodes repaired inside their block.

    Args:
        n_nodes: Number of nodes N
        n_blocks: Number of blocks K (near-equal sizes)
        p_in: Within-block edge probability
        p_out: Between-block edge probability, ``0 <= p_out <= p_in <= 1``
        rng: Source of randomness

    Raises:
        ParameterError: K > N or probabilities out of order
    """
    if n_blocks < 1 or n_blocks > n_nodes:
        raise ParameterError(f"n_blocks={n_blocks} must lie in [1, n_nodes={n_nodes}]")
    if not 0.0 <= p_out <= p_in <= 1.0:
        raise ParameterError(f"Need 0 <= p_out <= p_in <= 1, got p_in={p_in}, p_out={p_out}")

    sizes = block_sizes(n_nodes, n_blocks)
    probs = np.full((n_blocks, n_blocks), p_out)
    np.fill_diagonal(probs, p_in)
    g = nx.stochastic_block_model(sizes, probs.tolist(), seed=_nx_seed(rng))

    edges = [(int(i), int(j)) for i, j in g.edges()]
    degrees = np.zeros(n_nodes, dtype=np.int64)
    for i, j in edges:
        degrees[i] += 1
        degrees[j] += 1

    starts = np.concatenate([[0], np.cumsum(sizes)])
    block_of = np.repeat(np.arange(n_blocks), sizes)
    repaired = 0
    for node in np.flatnonzero(degrees == 0):
        if degrees[node] > 0:
            # already picked as the partner of an earlier isolated node
            continue
        block = block_of[node]
        candidates = np.arange(starts[block], starts[block + 1])
        candidates = candidates[candidates != node]
        if candidates.size == 0:
            candidates = np.delete(np.arange(n_nodes), node)
        if candidates.size == 0:
            raise ParameterError("A single-node network cannot avoid isolated nodes")
        partner = int(rng.choice(candidates))
        edges.append((int(node), partner))
        degrees[node] += 1
        degrees[partner] += 1
        repaired += 1

    if repaired:
        logger.debug(f"Block model: attached {repaired} isolated node(s) inside their block")
    return build_graph(edges, n_nodes)


def gen_powerlaw(n_nodes: int, m_attach: int, rng: np.random.Generator) -> AdjacencyGraph:
    """Barabási–Albert preferential attachment seeded with the complete graph on ``m+1`` nodes.

    Edge count is ``C(m+1, 2) + m * (N - m - 1)``.
    """
    if not 1 <= m_attach < n_nodes:
        raise ParameterError(f"Need 1 <= m_attach < n_nodes, got m_attach={m_attach}, n_nodes={n_nodes}")

    seed_graph = nx.complete_graph(m_attach + 1)
    if n_nodes == m_attach + 1:
        g = seed_graph
    else:
        g = nx.barabasi_albert_graph(n_nodes, m_attach, seed=_nx_seed(rng), initial_graph=seed_graph)
    return build_graph([(int(i), int(j)) for i, j in g.edges()], n_nodes)
