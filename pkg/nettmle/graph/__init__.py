"""Network representation, generators and the sparse SAR kernel."""

from .generators import gen_block, gen_powerlaw
from .linalg import DEFAULT_DELTA_RHO, check_rho, neumann_solve, omega, solve_sar
from .network import (
    AdjacencyGraph,
    NeighborhoodIndex,
    RowStochasticW,
    build_graph,
    load_edge_list,
    neighborhoods,
    row_normalize,
)

__all__ = [
    "AdjacencyGraph",
    "DEFAULT_DELTA_RHO",
    "NeighborhoodIndex",
    "RowStochasticW",
    "build_graph",
    "check_rho",
    "gen_block",
    "gen_powerlaw",
    "load_edge_list",
    "neighborhoods",
    "neumann_solve",
    "omega",
    "row_normalize",
    "solve_sar",
]
