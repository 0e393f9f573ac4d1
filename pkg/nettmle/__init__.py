"""nettmle - targeted estimation of interventional means under network autoregression."""

from .config import EstimateConfig, StudyConfig
from .errors import ConfigError, DataError, GraphError, NetTMLEError, NumericalError, ParameterError
from .logger import RunLogger

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "DataError",
    "EstimateConfig",
    "GraphError",
    "NetTMLEError",
    "NumericalError",
    "ParameterError",
    "RunLogger",
    "StudyConfig",
    "__version__",
]
