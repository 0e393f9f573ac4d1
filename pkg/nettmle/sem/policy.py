"""Intervention policies: known conditional laws P*(Z*|C)."""

import numpy as np
from scipy.special import expit

from ..config import PolicySpec
from ..errors import ParameterError
from ..graph import AdjacencyGraph
from .dataset import summarize_z


class InterventionPolicy:
    """Base class for all intervention policies.

    Subclasses implement :meth:`assign`, which maps summaries ``c`` of shape
    ``(..., N, p_c)`` and uniforms ``u`` of shape ``(..., N)`` to treatments. Draws are
    independent across nodes given ``c``.
    """

    @property
    def kind(self) -> str:
        raise NotImplementedError

    @property
    def is_stochastic(self) -> bool:
        return False

    def assign(self, c: np.ndarray, u: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def sample(self, c: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        return self.assign(c, rng.random(np.shape(c)[:-1]))

    def describe(self) -> dict:
        return {"kind": self.kind}


class StochasticPolicy(InterventionPolicy):
    """Bernoulli treatment with constant ``pi_star`` or ``logistic(intercept + c @ coefficients)``."""

    def __init__(
        self,
        pi_star: float | None = None,
        intercept: float | None = None,
        coefficients: list[float] | np.ndarray | None = None,
    ):
        if (pi_star is None) == (coefficients is None and intercept is None):
            raise ParameterError("Stochastic policy needs either pi_star or a logistic (intercept, coefficients)")
        if pi_star is not None and not 0.0 < pi_star < 1.0:
            raise ParameterError(f"Positivity requires 0 < pi_star < 1, got {pi_star}")
        self.pi_star = pi_star
        self.intercept = 0.0 if intercept is None else float(intercept)
        self.coefficients = None if coefficients is None else np.asarray(coefficients, dtype=float)

    @property
    def kind(self) -> str:
        return "stochastic"

    @property
    def is_stochastic(self) -> bool:
        return True

    def propensity(self, c: np.ndarray) -> np.ndarray:
        """Per-node treatment probability ``pi*(c_i)``."""
        c = np.asarray(c, dtype=float)
        if self.pi_star is not None:
            return np.full(c.shape[:-1], self.pi_star)
        coefficients = self.coefficients if self.coefficients is not None else np.zeros(c.shape[-1])
        if coefficients.shape[0] != c.shape[-1]:
            raise ParameterError(f"Policy has {coefficients.shape[0]} coefficients but C has {c.shape[-1]} columns")
        return expit(self.intercept + c @ coefficients)

    def density(self, z: np.ndarray, c: np.ndarray) -> np.ndarray:
        """Per-node density ``p*(z_i | c_i)`` of binary treatments."""
        pi = self.propensity(c)
        return np.where(np.asarray(z) >= 0.5, pi, 1.0 - pi)

    def assign(self, c: np.ndarray, u: np.ndarray) -> np.ndarray:
        return (u < self.propensity(c)).astype(float)

    def describe(self) -> dict:
        out = {"kind": self.kind}
        if self.pi_star is not None:
            out["pi_star"] = self.pi_star
        else:
            out["intercept"] = self.intercept
            out["coefficients"] = [float(b) for b in self.coefficients] if self.coefficients is not None else None
        return out


class DeterministicPolicy(InterventionPolicy):
    """Every node receives ``value``."""

    def __init__(self, value: float = 1.0):
        self.value = float(value)

    @property
    def kind(self) -> str:
        return "deterministic"

    def assign(self, c: np.ndarray, u: np.ndarray) -> np.ndarray:
        return np.full(np.shape(c)[:-1], self.value)

    def describe(self) -> dict:
        return {"kind": self.kind, "value": self.value}


class ThresholdPolicy(InterventionPolicy):
    """Dynamic rule: ``assign_value`` where ``c[:, feature]`` reaches ``cutoff``.

    ``cutoff`` is a population constant. Pass it directly, or leave it unset and call
    :meth:`calibrated` on a sample from the covariate law to freeze it at the q-quantile.
    Each node's treatment then depends on its own ``c_i`` only.
    """

    def __init__(
        self,
        feature: int,
        quantile: float,
        assign_value: float = 1.0,
        otherwise_value: float = 0.0,
        cutoff: float | None = None,
    ):
        if not 0.0 <= quantile <= 1.0:
            raise ParameterError(f"quantile must lie in [0, 1], got {quantile}")
        self.feature = int(feature)
        self.quantile = float(quantile)
        self.assign_value = float(assign_value)
        self.otherwise_value = float(otherwise_value)
        self.cutoff = None if cutoff is None else float(cutoff)

    @property
    def kind(self) -> str:
        return "threshold"

    def _column(self, c: np.ndarray) -> np.ndarray:
        c = np.asarray(c, dtype=float)
        if self.feature >= c.shape[-1]:
            raise ParameterError(f"Policy feature {self.feature} out of range for C with {c.shape[-1]} columns")
        return c[..., self.feature]

    def calibrated(self, c_sample: np.ndarray) -> "ThresholdPolicy":
        """Copy with ``cutoff`` frozen at the pooled q-quantile of ``c_sample[..., feature]``."""
        column = self._column(c_sample)
        if column.size == 0:
            raise ParameterError("Cannot calibrate a threshold policy on an empty sample")
        cutoff = float(np.quantile(column, self.quantile))
        return ThresholdPolicy(self.feature, self.quantile, self.assign_value, self.otherwise_value, cutoff)

    def assign(self, c: np.ndarray, u: np.ndarray) -> np.ndarray:
        column = self._column(c)
        if self.cutoff is None:
            raise ParameterError("Threshold policy has no cutoff; calibrate it on a covariate sample first")
        return np.where(column >= self.cutoff, self.assign_value, self.otherwise_value)

    def describe(self) -> dict:
        return {
            "kind": self.kind,
            "feature": self.feature,
            "quantile": self.quantile,
            "cutoff": self.cutoff,
            "assign_value": self.assign_value,
            "otherwise_value": self.otherwise_value,
        }


def build_policy(spec: PolicySpec) -> InterventionPolicy:
    """Instantiate the policy described by a config section.

    A threshold policy without an explicit ``cutoff`` comes back uncalibrated; see
    :func:`calibrate_policy`.
    """
    if spec.kind == "stochastic":
        if spec.coefficients is not None or spec.intercept is not None:
            return StochasticPolicy(intercept=spec.intercept, coefficients=spec.coefficients)
        return StochasticPolicy(pi_star=spec.pi_star)
    if spec.kind == "deterministic":
        return DeterministicPolicy(spec.value)
    return ThresholdPolicy(spec.feature, spec.quantile, spec.assign_value, spec.otherwise_value, spec.cutoff)


def calibrate_policy(policy: InterventionPolicy, c_sample: np.ndarray) -> InterventionPolicy:
    """Freeze the sample-dependent constants of ``policy``; other policies pass through."""
    if isinstance(policy, ThresholdPolicy) and policy.cutoff is None:
        return policy.calibrated(c_sample)
    return policy


def sample_intervention(
    policy: InterventionPolicy,
    c: np.ndarray,
    graph: AdjacencyGraph,
    rng: np.random.Generator,
    summary: str = "mean",
) -> tuple[np.ndarray, np.ndarray]:
    """Draw ``z* ~ P*(.|c)`` node-wise and summarise it to ``v*``."""
    z_star = policy.sample(c, rng)
    return z_star, summarize_z(z_star, graph, summary)
