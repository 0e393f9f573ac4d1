"""SAR solves and the adjustment direction by fixed-point Neumann iteration."""

import logging
import math

import numpy as np
import scipy.sparse as sp

from ..errors import NumericalError, ParameterError
from .network import RowStochasticW

logger = logging.getLogger(__name__)

DEFAULT_DELTA_RHO = 0.05
DEFAULT_TOLERANCE = 1e-12


def check_rho(rho: float, delta_rho: float = DEFAULT_DELTA_RHO) -> float:
    """Validate ``|rho| <= 1 - delta_rho``.

    Raises:
        ParameterError: rho outside the stationarity region
    """
    if not 0.0 < delta_rho < 1.0:
        raise ParameterError(f"delta_rho must lie in (0, 1), got {delta_rho}")
    if not np.isfinite(rho) or abs(rho) > 1.0 - delta_rho:
        raise ParameterError(
            f"rho={rho} violates stationarity: |rho| must be at most 1 - delta_rho = {1.0 - delta_rho:g}"
        )
    return float(rho)


def iteration_cap(rho: float, tol: float = DEFAULT_TOLERANCE) -> int:
    """Iteration budget ``10 * log(tol) / log|rho|``."""
    if rho == 0.0:
        return 1
    return max(10, int(math.ceil(10.0 * math.log(tol) / math.log(abs(rho)))))


def neumann_solve(
    operator: sp.csr_matrix,
    rho: float,
    rhs: np.ndarray,
    tol: float = DEFAULT_TOLERANCE,
) -> np.ndarray:
    """Solve ``(I - rho * operator) y = rhs`` by the iteration ``y <- rhs + rho * operator @ y``.

    The increment of one sweep equals the residual of the current iterate, so the returned
    vector satisfies ``||(I - rho*M) y - rhs||_inf <= tol * (1 + ||rhs||_inf)``.

    Raises:
        NumericalError: residual above tolerance after the iteration cap
    """
    rhs = np.asarray(rhs, dtype=float)
    if rho == 0.0:
        return rhs.copy()

    threshold = tol * (1.0 + float(np.max(np.abs(rhs), initial=0.0)))
    cap = iteration_cap(rho, tol)
    y = rhs.copy()
    for iteration in range(1, cap + 1):
        updated = rhs + rho * (operator @ y)
        residual = float(np.max(np.abs(y - updated), initial=0.0))
        if residual <= threshold:
            return y
        y = updated

    logger.error(f"Neumann iteration for rho={rho} did not converge in {cap} sweeps (residual {residual:.3e})")
    raise NumericalError(
        f"SAR solve did not converge within {cap} iterations (residual {residual:.3e})",
        iterations=cap,
    )


def solve_sar(
    W: RowStochasticW,
    rho: float,
    r: np.ndarray,
    delta_rho: float = DEFAULT_DELTA_RHO,
) -> np.ndarray:
    """Outcome vector ``y = (I - rho W)^{-1} r`` of the network autoregression.

    ``r`` may carry extra trailing columns, one system per column.
    """
    check_rho(rho, delta_rho)
    return neumann_solve(W.matrix, rho, r)


def omega(W: RowStochasticW, rho: float, delta_rho: float = DEFAULT_DELTA_RHO) -> np.ndarray:
    """Adjustment direction ``omega(rho) = (I - rho W^T)^{-1} 1``.

    Entries sum to ``N / (1 - rho)`` since W is row-stochastic.
    """
    check_rho(rho, delta_rho)
    return neumann_solve(W.transpose, rho, np.ones(W.n_nodes))
