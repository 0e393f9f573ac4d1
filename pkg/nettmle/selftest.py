"""Quick in-process invariant checks behind ``nettmle selftest``."""

from collections.abc import Callable
from typing import NamedTuple

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import spsolve

from .config import SimConfig
from .estimators import BasisSpec, fit_targeted_model, plug_in_bias, profile_rho
from .graph import gen_block, gen_powerlaw, neighborhoods, omega, row_normalize, solve_sar
from .rng import derive_rng
from .sem import gen_dataset

SEED = 7


class Check(NamedTuple):
    name: str
    passed: bool
    detail: str = ""


def _graph():
    return gen_block(60, 3, 0.3, 0.01, derive_rng(SEED, "graph"))


def check_graph_symmetry() -> Check:
    graph = _graph()
    asymmetric = (graph.adjacency - graph.adjacency.T).count_nonzero()
    return Check("adjacency symmetric, no loops", asymmetric == 0 and graph.adjacency.diagonal().sum() == 0)


def check_row_stochastic() -> Check:
    W = row_normalize(_graph())
    deviation = float(np.max(np.abs(np.asarray(W.matrix.sum(axis=1)).ravel() - 1.0)))
    return Check("W rows sum to 1", deviation < 1e-12, f"max deviation {deviation:.1e}")


def check_two_hop() -> Check:
    graph = _graph()
    index = neighborhoods(graph)
    ok = all(np.isin(index.closed[i], index.two_hop[i]).all() for i in range(graph.n_nodes))
    return Check("closed neighbourhoods inside two-hop sets", ok)


def check_powerlaw_edges() -> Check:
    n, m = 50, 2
    graph = gen_powerlaw(n, m, derive_rng(SEED, "powerlaw"))
    expected = m * (m + 1) // 2 + m * (n - m - 1)
    return Check("power-law edge count", graph.n_edges == expected, f"{graph.n_edges} vs {expected}")


def check_sar_solve() -> Check:
    graph = _graph()
    W = row_normalize(graph)
    r = derive_rng(SEED, "rhs").standard_normal(graph.n_nodes)
    direct = spsolve(sp.identity(graph.n_nodes, format="csc") - 0.6 * W.matrix.tocsc(), r)
    error = float(np.max(np.abs(solve_sar(W, 0.6, r) - direct)))
    return Check("Neumann SAR solve matches sparse LU", error < 1e-8, f"max error {error:.1e}")


def check_omega_sum() -> Check:
    graph = _graph()
    total = float(omega(row_normalize(graph), 0.4).sum())
    expected = graph.n_nodes / 0.6
    return Check("omega sums to N / (1 - rho)", abs(total - expected) < 1e-8 * expected, f"{total:.6f}")


def check_targeting() -> Check:
    graph = _graph()
    dataset = gen_dataset(SimConfig(n_nodes=graph.n_nodes), graph, derive_rng(SEED, "data"))
    initial = profile_rho(dataset, BasisSpec.misspecified(), lam=1e-3 * graph.n_nodes)
    bias = plug_in_bias(fit_targeted_model(initial, dataset), dataset)
    return Check("targeting removes the plug-in bias", abs(bias) < 1e-10, f"|bias| {abs(bias):.1e}")


def check_stream_determinism() -> Check:
    a = derive_rng(SEED, "data", 3).standard_normal(5)
    b = derive_rng(SEED, "data", 3).standard_normal(5)
    c = derive_rng(SEED, "data", 4).standard_normal(5)
    return Check("derived streams reproducible and distinct", np.array_equal(a, b) and not np.array_equal(a, c))


CHECKS: list[Callable[[], Check]] = [
    check_graph_symmetry,
    check_row_stochastic,
    check_two_hop,
    check_powerlaw_edges,
    check_sar_solve,
    check_omega_sum,
    check_targeting,
    check_stream_determinism,
]


def run_selftest() -> list[Check]:
    """Run every check; an exception counts as a failure."""
    results = []
    for check in CHECKS:
        try:
            results.append(check())
        except Exception as e:  # noqa: BLE001
            results.append(Check(check.__name__, False, f"{type(e).__name__}: {e}"))
    return results
