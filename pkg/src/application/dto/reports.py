"""Report models returned by the application services and emitted by the CLI."""

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ...domain.value_objects.estimation_method import EstimationMethod
from ...domain.value_objects.gini_target import GiniTarget
from ...domain.value_objects.weight_scheme import WeightScheme


class ComputeRow(BaseModel):
    distribution: str = Field(..., description="Distribution in family:params form")
    n: int = Field(..., ge=2, description="Gini order")
    gd: float = Field(..., ge=0.0, description="n-th order Gini deviation")
    gc: float | None = Field(None, description="n-th order Gini coefficient, when defined")
    method: str = Field(..., description="closed-form, quadrature or exact-step")


class EstimateReport(BaseModel):
    point: float = Field(..., description="Point estimate")
    n: int = Field(..., ge=2)
    target: GiniTarget
    scheme: WeightScheme
    std_error: float = Field(..., ge=0.0, description="Asymptotic or bootstrap standard error")
    ci_level: float = Field(..., gt=0.0, lt=1.0)
    ci: tuple[float, float] = Field(..., description="Confidence interval (lo, hi)")
    method: EstimationMethod
    sample_size: int = Field(..., ge=2)
    replications: int | None = Field(None, description="Bootstrap resamples, when bootstrapped")

    @model_validator(mode="after")
    def _check_interval(self) -> "EstimateReport":
        lo, hi = self.ci
        if lo > hi:
            raise ValueError(f"confidence interval ({lo}, {hi}) is reversed")
        if not lo <= self.point <= hi:
            raise ValueError(f"interval ({lo}, {hi}) does not contain the point estimate {self.point}")
        return self


class SimulationSummary(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    replications: int = Field(..., ge=1)
    estimate_mean: float
    estimate_variance: float = Field(..., ge=0.0)
    predicted_mean: float | None = Field(None, description="Population GD_n or GC_n")
    predicted_variance_over_n: float | None = Field(
        None,
        alias="predicted_variance_over_N",
        description="Asymptotic variance divided by the sample size",
    )
    ks_distance: float | None = Field(None, ge=0.0, le=1.0)
    distribution: str
    n: int = Field(..., ge=2)
    sample_size: int = Field(..., ge=2)
    target: GiniTarget


class VarianceRow(BaseModel):
    distribution: str
    n: int = Field(..., ge=2)
    variance_gd: float = Field(..., ge=0.0)
    variance_gc: float | None = Field(None, ge=0.0)


class BacktestReport(BaseModel):
    variant: str
    n: int = Field(..., ge=2)
    forecast_a: float
    forecast_b: float
    mean_score_a: float
    mean_score_b: float
    mean_diff: float = Field(..., description="Mean of S(a) - S(b); negative favours forecast a")
    t_statistic: float | None = Field(None, description="None when every difference is equal")
    p_value: float | None = Field(None, description="Two-sided p-value of the t statistic")
    degenerate: bool = False
    tuples: int = Field(..., ge=2)


class ErmReport(BaseModel):
    variant: str
    n: int = Field(..., ge=2)
    tuples: int = Field(..., ge=1)
    minimizer: float
    search_minimizer: float = Field(..., description="Minimizer found by bracketed golden-section search")
    std_error: float | None = None


class ReducedOrderReport(BaseModel):
    n: int = Field(..., ge=3, description="Odd Gini order")
    observations: int = Field(..., description="Tuple length actually used, n - 1")
    coefficients: list[float] = Field(..., description="Score coefficients a_1..a_{n-1}")
    top_coefficient: float = Field(..., description="Coefficient of (1-t)^n in h_n, zero for odd n")
    minimizer: float
    std_error: float | None = None
    target: float | None = Field(None, description="GD_n of the generating distribution")


class RatioBoundReport(BaseModel):
    kind: str
    m: int | None = None
    n: int | None = None
    lower: float
    upper: float | None = Field(..., description="None when the ratio is unbounded above")
    upper_unbounded: bool = False
    lower_witness: str
    upper_witness: str
    lower_attained: bool
    upper_attained: bool


class SdBoundReport(BaseModel):
    n: int = Field(..., ge=2)
    bound: float = Field(..., gt=0.0)
    grid_size: int
    witness_ratio: float = Field(..., description="GD_n / SD on the discretized witness")
    witness_mean: float


class MonotonicityReport(BaseModel):
    distribution: str
    orders: list[int]
    gd: list[float]
    gc: list[float] | None = None
    gd_nonincreasing: bool
    gc_nonincreasing: bool | None = None
    versus: str | None = None
    versus_gc: list[float] | None = None
    crossing_order: int | None = Field(None, description="First n where the n=2 GC ordering reverses")


class PanelRow(BaseModel):
    entity: str
    year: int
    gc: dict[int, float] = Field(default_factory=dict)
    top_shares: dict[float, float] = Field(default_factory=dict)
    flagged: bool = False

    @model_validator(mode="after")
    def _check_range(self) -> "PanelRow":
        for order, value in self.gc.items():
            if not 0.0 <= value < 1.0:
                raise ValueError(f"GC_{order} = {value} outside [0, 1)")
        return self


class PanelError(BaseModel):
    entity: str
    year: int
    message: str


class PanelTable(BaseModel):
    orders: list[int]
    shares: list[float]
    rows: list[PanelRow] = Field(default_factory=list)
    errors: list[PanelError] = Field(default_factory=list)

    def columns(self) -> list[str]:
        gc_columns = [f"gc_{n}" for n in self.orders]
        share_columns = [share_column(alpha) for alpha in self.shares]
        return ["entity", "year", *gc_columns, *share_columns]


def share_column(alpha: float) -> str:
    return f"top_{alpha * 100:g}"
