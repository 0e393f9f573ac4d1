"""Result data structures."""

from typing import Any, Literal

from pydantic import BaseModel, Field, computed_field


class VarianceEstimate(BaseModel):
    """Variance of Psi_hat split into its outcome-noise and covariate parts."""

    sigma2_y_part: float = Field(ge=0.0)
    sigma2_x_part: float = Field(ge=0.0)
    sigma2_y: float = Field(default=0.0, ge=0.0)  # residual variance behind the y-part
    method: Literal["nested-bootstrap", "projection-oracle", "network-hac"] = "nested-bootstrap"
    n_outer: int | None = None
    n_inner: int | None = None

    @computed_field
    @property
    def total(self) -> float:
        return self.sigma2_y_part + self.sigma2_x_part

    @property
    def se(self) -> float:
        return self.total**0.5


class MethodResult(BaseModel):
    """One estimator applied to one dataset."""

    method: str
    psi_hat: float | None = None
    se: float | None = None
    ci_lo: float | None = None
    ci_hi: float | None = None
    t_star: float | None = None
    rho_hat0: float | None = None
    variance: VarianceEstimate | None = None
    diagnostics: dict[str, Any] = Field(default_factory=dict)
    error: str | None = None
    runtime_s: float = 0.0

    @property
    def ok(self) -> bool:
        return self.error is None and self.psi_hat is not None


class ReplicationResult(BaseModel):
    """All enabled methods on the dataset of replication ``r``."""

    replication: int
    methods: dict[str, MethodResult] = Field(default_factory=dict)
    # only set when the network is redrawn per replication
    psi_true: float | None = None
    psi_true_mc_se: float | None = None


class MetricsRow(BaseModel):
    """Aggregates for one method over R replications."""

    method: str
    bias: float | None = None
    se: float | None = None  # empirical SD of Psi_hat (divisor R)
    cp: float | None = Field(default=None, ge=0.0, le=1.0)
    mean_se: float | None = None
    runtime_s: float = 0.0
    n_ok: int = 0
    n_failed: int = 0


class MetricsTable(BaseModel):
    """Per-method metrics plus the ground truth they are measured against."""

    psi_true: float
    psi_true_mc_se: float
    rows: list[MetricsRow] = Field(default_factory=list)
    warnings: list[str] = Field(default_factory=list)

    def row(self, method: str) -> MetricsRow:
        for row in self.rows:
            if row.method == method:
                return row
        raise KeyError(method)


class StudyResult(BaseModel):
    """Full study output: config echo, truth, metrics and every replication."""

    config: dict[str, Any]
    metrics: MetricsTable
    replications: list[ReplicationResult]
    versions: dict[str, str] = Field(default_factory=dict)


class IngestReport(BaseModel):
    """Bookkeeping from loading a real-data CSV."""

    n_rows: int
    n_nodes: int
    n_edges: int
    dropped_isolated: list[str] = Field(default_factory=list)
    x_columns: list[str] = Field(default_factory=list)
    log_transformed: list[str] = Field(default_factory=list)
    standardized: bool = False


class PolicyEstimate(BaseModel):
    """Estimates for one intervention policy on real data."""

    policy: dict[str, Any]
    methods: dict[str, MethodResult] = Field(default_factory=dict)
    observed_mean: float
    contrasts: dict[str, float | None] = Field(default_factory=dict)  # psi_hat - observed mean


class EstimateResult(BaseModel):
    """Output of the ``estimate`` command."""

    config: dict[str, Any]
    ingest: IngestReport
    policies: dict[str, PolicyEstimate] = Field(default_factory=dict)
    versions: dict[str, str] = Field(default_factory=dict)
