"""Base estimator classes."""

import logging
import time
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..config import BootstrapConfig, InitialFitConfig, KdeConfig
from ..errors import NetTMLEError
from ..graph import DEFAULT_DELTA_RHO
from ..schema import MethodResult
from ..sem import Dataset, InterventionPolicy
from .basis import BasisSpec

logger = logging.getLogger(__name__)

# numerical breakdowns inside one method; anything else is a bug and propagates
ESTIMATION_FAILURES = (NetTMLEError, ValueError, ArithmeticError, np.linalg.LinAlgError)


class EstimatorSettings(BaseModel):
    """Everything an estimator needs besides the data, the policy and its rng stream."""

    model_config = ConfigDict(frozen=True)

    basis: BasisSpec = Field(default_factory=BasisSpec.correct)
    initial: InitialFitConfig = Field(default_factory=InitialFitConfig)
    bootstrap: BootstrapConfig = Field(default_factory=BootstrapConfig)
    kde: KdeConfig = Field(default_factory=KdeConfig)
    level: float = 0.95
    delta_rho: float = DEFAULT_DELTA_RHO

    def ridge_penalty(self, n_nodes: int) -> float:
        return self.initial.lambda_scale * n_nodes


class Estimator:
    """Base class for all estimators of Psi."""

    @property
    def name(self) -> str:
        """Method label used in configs and reports."""
        raise NotImplementedError

    @property
    def description(self) -> str:
        raise NotImplementedError

    def estimate(
        self,
        dataset: Dataset,
        policy: InterventionPolicy,
        settings: EstimatorSettings,
        rng: np.random.Generator,
    ) -> MethodResult:
        """Fit the estimator and return its point estimate, SE and interval."""
        raise NotImplementedError

    def run(
        self,
        dataset: Dataset,
        policy: InterventionPolicy,
        settings: EstimatorSettings,
        rng: np.random.Generator,
    ) -> MethodResult:
        """:meth:`estimate` with timing; library and numerical errors become a failed result."""
        start = time.perf_counter()
        try:
            result = self.estimate(dataset, policy, settings, rng)
        except ESTIMATION_FAILURES as e:
            logger.warning(f"{self.name} failed: {type(e).__name__}: {e}")
            result = MethodResult(method=self.name, error=f"{type(e).__name__}: {e}")
        return result.model_copy(update={"runtime_s": time.perf_counter() - start})

    def to_schema(self) -> dict[str, Any]:
        return {"name": self.name, "description": self.description}
