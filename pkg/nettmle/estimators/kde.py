"""Gaussian product-kernel conditional density estimation."""

import numpy as np
from scipy.special import logsumexp

from ..errors import NumericalError, ParameterError

MIN_SAMPLES = 20
_LOG_SQRT_2PI = 0.5 * np.log(2.0 * np.pi)


def silverman_bandwidths(samples: np.ndarray, multiplier: float = 1.0) -> np.ndarray:
    """Per-dimension ``1.06 * sd * n^{-1/5}``; dimensions without spread use ``sd = 1``."""
    samples = np.asarray(samples, dtype=float)
    sd = samples.std(axis=0, ddof=1) if samples.shape[0] > 1 else np.ones(samples.shape[1])
    sd = np.where(sd > 0.0, sd, 1.0)
    return multiplier * 1.06 * sd * samples.shape[0] ** (-0.2)


class ConditionalKde:
    """``p_hat(v | c) = KDE_(v,c)(v, c) / KDE_c(c)`` from paired samples.

    Both KDEs share the samples and the per-dimension bandwidths; the conditional value is
    floored at ``floor``.
    """

    def __init__(
        self,
        v_samples: np.ndarray,
        c_samples: np.ndarray,
        bandwidth_multiplier: float = 1.0,
        floor: float = 1e-12,
        chunk_size: int = 512,
    ):
        v_samples = np.asarray(v_samples, dtype=float)
        c_samples = np.asarray(c_samples, dtype=float)
        if v_samples.ndim == 1:
            v_samples = v_samples[:, None]
        if c_samples.ndim == 1:
            c_samples = c_samples[:, None]
        if v_samples.shape[0] != c_samples.shape[0]:
            raise ParameterError(f"v and c sample counts differ: {v_samples.shape[0]} vs {c_samples.shape[0]}")
        if v_samples.shape[0] < MIN_SAMPLES:
            raise ParameterError(f"Conditional KDE needs at least {MIN_SAMPLES} samples, got {v_samples.shape[0]}")

        self.v_dim = v_samples.shape[1]
        self.samples = np.hstack([v_samples, c_samples])
        self.bandwidths = silverman_bandwidths(self.samples, bandwidth_multiplier)
        self.floor = floor
        self.chunk_size = chunk_size

    @property
    def n_samples(self) -> int:
        return self.samples.shape[0]

    def _log_kernels(self, query: np.ndarray, dims: slice) -> np.ndarray:
        """``log prod_d K_h((q_d - s_d) / h_d) / h_d`` for every (query, sample) pair."""
        h = self.bandwidths[dims]
        scaled = (query[:, None, dims] - self.samples[None, :, dims]) / h
        return -0.5 * np.sum(scaled**2, axis=-1) - np.sum(np.log(h)) - scaled.shape[-1] * _LOG_SQRT_2PI

    def log_densities(self, v: np.ndarray, c: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Joint and marginal log KDE values at each query row."""
        v = np.asarray(v, dtype=float).reshape(-1, self.v_dim)
        c = np.asarray(c, dtype=float).reshape(v.shape[0], self.samples.shape[1] - self.v_dim)
        query = np.hstack([v, c])
        log_n = np.log(self.n_samples)
        joint = np.empty(query.shape[0])
        marginal = np.zeros(query.shape[0])
        for start in range(0, query.shape[0], self.chunk_size):
            block = query[start : start + self.chunk_size]
            stop = start + block.shape[0]
            joint[start:stop] = logsumexp(self._log_kernels(block, slice(None)), axis=1) - log_n
            if self.samples.shape[1] > self.v_dim:
                marginal[start:stop] = logsumexp(self._log_kernels(block, slice(self.v_dim, None)), axis=1) - log_n
        return joint, marginal

    def evaluate(self, v: np.ndarray, c: np.ndarray) -> np.ndarray:
        """Floored conditional density at each query.

        Raises:
            NumericalError: the marginal KDE underflows to zero at some query
        """
        joint, marginal = self.log_densities(v, c)
        if np.isneginf(marginal).any():
            bad = int(np.flatnonzero(np.isneginf(marginal))[0])
            raise NumericalError(f"Marginal density of c is zero at query {bad}; the query lies outside the sample support")
        return np.maximum(np.exp(joint - marginal), self.floor)


def conditional_density_kde(
    v_samples: np.ndarray,
    c_samples: np.ndarray,
    v: np.ndarray,
    c: np.ndarray,
    bandwidth_multiplier: float = 1.0,
    floor: float = 1e-12,
) -> np.ndarray:
    """Fit a :class:`ConditionalKde` and evaluate it at ``(v, c)``."""
    return ConditionalKde(v_samples, c_samples, bandwidth_multiplier, floor).evaluate(v, c)
