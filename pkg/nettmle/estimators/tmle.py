"""Targeting step, plug-in-bias diagnostic and the bootstrap TMLE of Psi."""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ..errors import NumericalError, ParameterError
from ..graph import DEFAULT_DELTA_RHO, check_rho, omega, row_normalize
from ..rng import child_seed, derive_rng
from ..sem import Dataset, InterventionPolicy, summarize_x, summarize_z
from .initial import InitialEstimate


@dataclass(frozen=True, eq=False)
class TargetedModel:
    """Outcome model ``g_t(v_i, c_i) = g_hat0(v_i, c_i) + t_star * omega_hat_i``."""

    initial: InitialEstimate
    omega_hat: np.ndarray
    t_star: float

    @property
    def rho_hat0(self) -> float:
        return self.initial.rho_hat0

    def evaluate(self, v: np.ndarray, c: np.ndarray) -> np.ndarray:
        """Targeted fit for all nodes; ``v``, ``c`` have shape ``(..., N, k)``."""
        return self.initial.evaluate(v, c) + self.t_star * self.omega_hat

    def evaluate_nodes(self, v: np.ndarray, c: np.ndarray, nodes: np.ndarray) -> np.ndarray:
        """Targeted fit for the listed ``nodes``; ``v``, ``c`` have shape ``(..., len(nodes), k)``."""
        return self.initial.evaluate(v, c) + self.t_star * self.omega_hat[nodes]

    def evaluate_i(self, i: int, v_i: np.ndarray, c_i: np.ndarray) -> float:
        """Targeted fit for node ``i`` at a single ``(v_i, c_i)``."""
        return float(self.initial.evaluate(v_i, c_i) + self.t_star * self.omega_hat[i])


class BootstrapEstimate(NamedTuple):
    psi_hat: float
    replicates: np.ndarray


def residualize(dataset: Dataset, rho_hat0: float, delta_rho: float = DEFAULT_DELTA_RHO) -> np.ndarray:
    """``r_hat0 = (I - rho_hat0 W) y``."""
    check_rho(rho_hat0, delta_rho)
    return dataset.y - rho_hat0 * (row_normalize(dataset.graph).matrix @ dataset.y)


def target_step(r_hat0: np.ndarray, g0_values: np.ndarray, omega_hat: np.ndarray) -> float:
    """Least-squares fluctuation ``t* = (w'w)^{-1} w'(r_hat0 - g_hat0)`` along ``w = omega_hat``."""
    norm2 = float(omega_hat @ omega_hat)
    if norm2 <= 0.0:
        raise NumericalError("omega_hat must be non-zero")
    return float(omega_hat @ (np.asarray(r_hat0) - np.asarray(g0_values)) / norm2)


def fit_targeted_model(
    initial: InitialEstimate,
    dataset: Dataset,
    delta_rho: float = DEFAULT_DELTA_RHO,
) -> TargetedModel:
    """Targeting step: residualise at rho_hat0 and fluctuate g_hat0 along omega(rho_hat0)."""
    omega_hat = omega(row_normalize(dataset.graph), initial.rho_hat0, delta_rho)
    r_hat0 = residualize(dataset, initial.rho_hat0, delta_rho)
    g0_values = initial.evaluate(dataset.v, dataset.c)
    return TargetedModel(initial=initial, omega_hat=omega_hat, t_star=target_step(r_hat0, g0_values, omega_hat))


def untargeted_model(
    initial: InitialEstimate,
    dataset: Dataset,
    delta_rho: float = DEFAULT_DELTA_RHO,
) -> TargetedModel:
    """The initial fit with the fluctuation forced to ``t = 0``."""
    omega_hat = omega(row_normalize(dataset.graph), initial.rho_hat0, delta_rho)
    return TargetedModel(initial=initial, omega_hat=omega_hat, t_star=0.0)


def plug_in_bias(model: TargetedModel, dataset: Dataset) -> float:
    """``N^{-1} omega_hat' {r_hat0 - g_t(v, c)}``; zero after the targeting step."""
    residual = dataset.y - model.rho_hat0 * (row_normalize(dataset.graph).matrix @ dataset.y)
    return float(model.omega_hat @ (residual - model.evaluate(dataset.v, dataset.c)) / dataset.n_nodes)


def bootstrap_psi(
    model: TargetedModel,
    x: np.ndarray,
    dataset: Dataset,
    policy: InterventionPolicy,
    n_boot: int,
    root: int,
    chunk_size: int = 256,
) -> np.ndarray:
    """Replicates ``Psi_(b) = N^{-1} omega_hat' g_t(v*(b), c(b))`` for ``b < n_boot``.

    Replicate ``b`` resamples node attributes iid from the rows of ``x`` onto the fixed
    node positions and draws ``z*`` from the policy, all from the stream ``(root, b)``.
    """
    n = dataset.n_nodes
    graph = dataset.graph
    replicates = np.empty(n_boot)
    for start in range(0, n_boot, chunk_size):
        stop = min(start + chunk_size, n_boot)
        indices = np.empty((stop - start, n), dtype=np.int64)
        uniforms = np.empty((stop - start, n))
        for row, b in enumerate(range(start, stop)):
            stream = derive_rng(root, b)
            indices[row] = stream.integers(0, n, size=n)
            uniforms[row] = stream.random(n)
        c = summarize_x(x[indices], graph, dataset.summary)
        v = summarize_z(policy.assign(c, uniforms), graph, dataset.summary)
        replicates[start:stop] = model.evaluate(v, c) @ model.omega_hat / n
    return replicates


def estimate_psi(
    model: TargetedModel,
    dataset: Dataset,
    policy: InterventionPolicy,
    n_boot: int,
    rng: np.random.Generator,
    chunk_size: int = 256,
) -> BootstrapEstimate:
    """Bootstrap TMLE ``Psi_hat = B^{-1} sum_b Psi_(b)``."""
    if n_boot < 1:
        raise ParameterError(f"n_boot must be at least 1, got {n_boot}")
    replicates = bootstrap_psi(model, dataset.x, dataset, policy, n_boot, child_seed(rng), chunk_size)
    return BootstrapEstimate(psi_hat=float(replicates.mean()), replicates=replicates)


def estimate_psi_de(
    initial: InitialEstimate,
    dataset: Dataset,
    policy: InterventionPolicy,
    n_boot: int,
    rng: np.random.Generator,
    chunk_size: int = 256,
    delta_rho: float = DEFAULT_DELTA_RHO,
) -> float:
    """Direct (untargeted) estimate: :func:`estimate_psi` with ``t = 0``."""
    model = untargeted_model(initial, dataset, delta_rho)
    return estimate_psi(model, dataset, policy, n_boot, rng, chunk_size).psi_hat
