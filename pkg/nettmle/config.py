"""Configuration management module

Provides the study and estimation configuration trees and their YAML loading.
"""

from pathlib import Path
from typing import Literal

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from .errors import ConfigError

Method = Literal["TMLE", "DE", "NDI", "ANI"]
BasisPreset = Literal["correct", "misspecified"]
Summary = Literal["mean", "sum"]

ALL_METHODS: tuple[str, ...] = ("TMLE", "DE", "NDI", "ANI")


class _Section(BaseModel):
    """Base for config sections: unknown keys are rejected."""

    model_config = ConfigDict(extra="forbid")


class GCoefficients(_Section):
    """Coefficients of the outcome regression g(V, C)"""

    intercept: float = 0.5
    own_treatment: float = 1.0
    neighbor_treatment: float = 0.8
    own_x: list[float] = Field(default_factory=lambda: [0.6, -0.4])
    neighbor_x: list[float] = Field(default_factory=lambda: [0.3, 0.3])
    # Z*X1, X1^2, X2^2, X2^3
    gamma: list[float] = Field(default_factory=lambda: [0.5, 0.3, -0.3, 0.2])

    @model_validator(mode="after")
    def _check_lengths(self) -> "GCoefficients":
        if len(self.own_x) != 2 or len(self.neighbor_x) != 2:
            raise ValueError("own_x and neighbor_x need one coefficient per covariate (2)")
        if len(self.gamma) != 4:
            raise ValueError("gamma needs 4 coefficients (Z*X1, X1^2, X2^2, X2^3)")
        return self


class TreatmentModel(_Section):
    """Logistic propensity of the observed treatment given C"""

    intercept: float = 0.0
    coefficients: list[float] = Field(default_factory=lambda: [0.2, 0.2, 0.2, 0.2])


class SimConfig(_Section):
    """Structural equation model used to simulate data"""

    n_nodes: int = Field(default=400, ge=2)
    rho0: float = 0.4
    g: GCoefficients = Field(default_factory=GCoefficients)
    treatment: TreatmentModel = Field(default_factory=TreatmentModel)
    noise_sd: float = Field(default=1.0, ge=0.0)
    noise: Literal["gaussian", "uniform"] = "gaussian"
    x_dim: Literal[2] = 2
    summary: Summary = "mean"
    delta_rho: float = Field(default=0.05, gt=0.0, lt=1.0)

    @model_validator(mode="after")
    def _check_stationarity(self) -> "SimConfig":
        if abs(self.rho0) > 1.0 - self.delta_rho:
            raise ValueError(f"|rho0|={abs(self.rho0)} exceeds 1 - delta_rho = {1.0 - self.delta_rho:g}")
        if len(self.treatment.coefficients) != 2 * self.x_dim:
            raise ValueError(f"treatment.coefficients needs {2 * self.x_dim} entries (one per C column)")
        return self


class NetworkSpec(_Section):
    """Network generator settings"""

    kind: Literal["block", "powerlaw", "file"] = "block"
    n_blocks: int | None = None  # default N // 20
    p_in: float = Field(default=0.3, ge=0.0, le=1.0)
    p_out: float | None = None  # default 0.3 / N
    m_attach: int = Field(default=2, ge=1)
    edges_path: str | None = None
    fixed: bool = True  # same network for every replication

    @model_validator(mode="after")
    def _check_file(self) -> "NetworkSpec":
        if self.kind == "file" and not self.edges_path:
            raise ValueError("network.kind = 'file' requires network.edges_path")
        return self

    def resolved_blocks(self, n_nodes: int) -> int:
        return self.n_blocks if self.n_blocks is not None else max(1, n_nodes // 20)

    def resolved_p_out(self, n_nodes: int) -> float:
        return self.p_out if self.p_out is not None else 0.3 / n_nodes


class PolicySpec(_Section):
    """Intervention policy P*(Z*|C)

    - stochastic: Bernoulli(pi_star) or Bernoulli(logistic(intercept + C @ coefficients))
    - deterministic: every node gets ``value``
    - threshold: ``assign_value`` where C[:, feature] is at or above ``cutoff``,
      ``otherwise_value`` elsewhere. Without an explicit cutoff it is frozen at the
      q-quantile of the covariate law (simulation) or of the observed C (real data).
    """

    kind: Literal["stochastic", "deterministic", "threshold"] = "stochastic"
    pi_star: float | None = 0.6
    intercept: float | None = None
    coefficients: list[float] | None = None
    value: float = 1.0
    feature: int = Field(default=0, ge=0)
    quantile: float = Field(default=0.6, ge=0.0, le=1.0)
    assign_value: float = 1.0
    otherwise_value: float = 0.0
    cutoff: float | None = None


class BootstrapConfig(_Section):
    """Bootstrap sizes"""

    n_boot: int = Field(default=2000, ge=1)  # B for the point estimate
    n_outer: int = Field(default=200, ge=50)  # M for the x-part variance
    n_inner: int = Field(default=200, ge=50)  # B for the x-part variance
    chunk_size: int = Field(default=256, ge=1)


class InitialFitConfig(_Section):
    """Initial estimator (profile ridge regression over rho)"""

    objective: Literal["likelihood", "rss"] = "likelihood"
    lambda_scale: float = Field(default=1e-3, ge=0.0)  # lambda = lambda_scale * N
    standardize: bool = True


class KdeConfig(_Section):
    """Kernel density settings for the ANI estimator"""

    bandwidth_multiplier: float = Field(default=1.0, gt=0.0)
    clip: float = Field(default=20.0, ge=1.0)
    n_star_draws: int | None = None  # default 10 * N
    floor: float = Field(default=1e-12, gt=0.0)


class OutputConfig(_Section):
    """Report and log locations"""

    dir: str = "./results"
    log_dir: str | None = None  # default ~/.nettmle/log


class IngestSchema(_Section):
    """Column roles of a real-data CSV"""

    id_column: str = "id"
    y_column: str = "y"
    z_column: str = "z"
    x_columns: list[str] | None = None  # default: every column named x<k>, in order of k
    log_transform: list[str] = Field(default_factory=list)
    standardize: bool = False
    summary: Summary = "mean"


class _YamlConfig(_Section):
    """Root config with YAML loading."""

    @classmethod
    def from_yaml(cls, config_path: str | Path):
        """Load configuration from YAML file

        Args:
            config_path: Configuration file path

        Returns:
            Config instance

        Raises:
            FileNotFoundError: Configuration file does not exist
            ConfigError: Invalid configuration format, unknown keys or invalid values
        """
        config_path = Path(config_path)

        if not config_path.exists():
            raise FileNotFoundError(f"Configuration file does not exist: {config_path}")

        with open(config_path, encoding="utf-8") as f:
            try:
                data = yaml.safe_load(f)
            except yaml.YAMLError as e:
                raise ConfigError(f"{config_path}: invalid YAML: {e}") from e

        if not data:
            raise ConfigError(f"Configuration file is empty: {config_path}")
        if not isinstance(data, dict):
            raise ConfigError(f"{config_path}: top level must be a mapping")

        return cls.from_dict(data, source=str(config_path))

    @classmethod
    def from_dict(cls, data: dict, source: str = "<dict>"):
        try:
            return cls.model_validate(data)
        except ValidationError as e:
            problems = "; ".join(
                f"{'.'.join(str(p) for p in err['loc']) or '<root>'}: {err['msg']}" for err in e.errors()
            )
            raise ConfigError(f"{source}: {problems}") from e

    @staticmethod
    def get_package_dir() -> Path:
        """Get the package installation directory"""
        return Path(__file__).parent

    @classmethod
    def find_config_file(cls, filename: str) -> Path | None:
        """Find configuration file with priority order

        Search for config file in the following order of priority:
        1) config/{filename} in current directory (development mode)
        2) ~/.nettmle/config/{filename} in user home directory
        3) {package}/config/{filename} in package installation directory

        Args:
            filename: Configuration file name (e.g., "config-example.yaml")

        Returns:
            Path to found config file, or None if not found
        """
        dev_config = Path.cwd() / "config" / filename
        if dev_config.exists():
            return dev_config

        user_config = Path.home() / ".nettmle" / "config" / filename
        if user_config.exists():
            return user_config

        package_config = cls.get_package_dir() / "config" / filename
        if package_config.exists():
            return package_config

        return None

    @classmethod
    def resolve_path(cls, name_or_path: str | Path) -> Path:
        """Use ``name_or_path`` if it exists, otherwise search the config directories."""
        path = Path(name_or_path).expanduser()
        if path.exists():
            return path
        found = cls.find_config_file(path.name)
        return found if found is not None else path


class StudyConfig(_YamlConfig):
    """Monte Carlo study configuration (``simulate`` and ``oracle`` commands)"""

    network: NetworkSpec = Field(default_factory=NetworkSpec)
    sim: SimConfig = Field(default_factory=SimConfig)
    policy: PolicySpec = Field(default_factory=PolicySpec)
    methods: list[Method] = Field(default_factory=lambda: list(ALL_METHODS))
    basis: BasisPreset = "correct"
    method_basis: dict[Method, BasisPreset] = Field(default_factory=dict)
    replications: int = Field(default=200, ge=1)
    bootstrap: BootstrapConfig = Field(default_factory=BootstrapConfig)
    initial: InitialFitConfig = Field(default_factory=InitialFitConfig)
    kde: KdeConfig = Field(default_factory=KdeConfig)
    seed: int = Field(default=20240501, ge=0)
    oracle_n_mc: int = Field(default=100_000, ge=1000)
    level: float = Field(default=0.95, gt=0.0, lt=1.0)
    workers: int = Field(default=1, ge=1)
    output: OutputConfig = Field(default_factory=OutputConfig)

    @field_validator("methods")
    @classmethod
    def _unique_methods(cls, methods: list[str]) -> list[str]:
        if len(set(methods)) != len(methods):
            raise ValueError(f"duplicate entries in methods: {methods}")
        return methods

    def basis_for(self, method: str) -> str:
        return self.method_basis.get(method, self.basis)


class EstimateConfig(_YamlConfig):
    """Real-data estimation configuration (``estimate`` command)"""

    ingest: IngestSchema = Field(default_factory=IngestSchema)
    policies: dict[str, PolicySpec] = Field(default_factory=lambda: {"policy": PolicySpec()})
    methods: list[Method] = Field(default_factory=lambda: ["TMLE", "DE", "NDI"])
    basis: BasisPreset = "misspecified"
    bootstrap: BootstrapConfig = Field(default_factory=BootstrapConfig)
    initial: InitialFitConfig = Field(default_factory=InitialFitConfig)
    kde: KdeConfig = Field(default_factory=KdeConfig)
    seed: int = Field(default=20240501, ge=0)
    level: float = Field(default=0.95, gt=0.0, lt=1.0)
    delta_rho: float = Field(default=0.05, gt=0.0, lt=1.0)
    output: OutputConfig = Field(default_factory=OutputConfig)

    @field_validator("policies")
    @classmethod
    def _non_empty(cls, policies: dict[str, PolicySpec]) -> dict[str, PolicySpec]:
        if not policies:
            raise ValueError("at least one policy is required")
        return policies
