"""Exception hierarchy.

Every error carries the exit code the CLI returns when it escapes a command.
"""


class NetTMLEError(Exception):
    """Base class for all nettmle errors."""

    exit_code = 1


class ConfigError(NetTMLEError):
    """Invalid or unreadable configuration."""

    exit_code = 1


class ParameterError(ConfigError, ValueError):
    """Argument outside its admissible range (stationarity, positivity, sizes)."""


class DataError(NetTMLEError, ValueError):
    """Malformed input data."""

    exit_code = 2


class GraphError(DataError):
    """Invalid network: self-loop, out-of-range node id or isolated node."""

    def __init__(self, message: str, node: int | None = None):
        self.node = node
        super().__init__(message)


class NumericalError(NetTMLEError):
    """Numerical failure: singular system or a solver that did not converge."""

    exit_code = 3

    def __init__(self, message: str, iterations: int | None = None):
        self.iterations = iterations
        super().__init__(message)
