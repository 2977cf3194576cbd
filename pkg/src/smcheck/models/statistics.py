"""Statistical parameters and results of SMC queries."""

from enum import Enum
from typing import Optional

from pydantic import BaseModel, Field, field_validator, model_validator


class ResultKind(str, Enum):
    """Which engine produced a result."""

    ESTIMATE = "estimate"
    TEST = "test"
    MEAN = "mean"

    def __str__(self) -> str:
        """String representation."""
        return self.value


class Decision(str, Enum):
    """Outcome of a hypothesis test: H0 is p >= theta + delta, H1 is p <= theta - delta."""

    ACCEPT_H0 = "accept_H0"
    ACCEPT_H1 = "accept_H1"

    def __str__(self) -> str:
        """String representation."""
        return self.value


class StatParams(BaseModel):
    """Accuracy and strength parameters shared by all engines."""

    delta: float = Field(default=0.02, description="Absolute error / indifference half-width", gt=0, lt=1)
    alpha: float = Field(default=0.02, description="Type-I error bound", gt=0, lt=1)
    beta: float = Field(default=0.02, description="Type-II error bound", gt=0, lt=1)
    theta: Optional[float] = Field(default=None, description="Test threshold", gt=0, lt=1)

    model_config = {"frozen": True}

    @model_validator(mode="after")
    def validate_indifference_region(self) -> "StatParams":
        """Keep (theta - delta, theta + delta) inside (0, 1) when a threshold is set."""
        if self.theta is not None:
            if not (self.theta - self.delta > 0 and self.theta + self.delta < 1):
                raise ValueError(
                    f"indifference region ({self.theta - self.delta:g}, "
                    f"{self.theta + self.delta:g}) must lie inside (0, 1)"
                )
        return self

    @property
    def p0(self) -> float:
        """Lower edge of H0 (theta + delta)."""
        if self.theta is None:
            raise ValueError("p0 needs a threshold")
        return self.theta + self.delta

    @property
    def p1(self) -> float:
        """Upper edge of H1 (theta - delta)."""
        if self.theta is None:
            raise ValueError("p1 needs a threshold")
        return self.theta - self.delta

    def with_theta(self, theta: float) -> "StatParams":
        """Copy with a threshold set (validated)."""
        return StatParams(delta=self.delta, alpha=self.alpha, beta=self.beta, theta=theta)


class StatResult(BaseModel):
    """Outcome of one query."""

    kind: ResultKind = Field(..., description="Engine that produced the result")
    query: str = Field(default="", description="Query text")
    model: str = Field(default="", description="Model name")
    params: StatParams = Field(..., description="Parameters the engine ran with")
    master_seed: int = Field(..., description="Master seed the per-run seeds derive from", ge=0)
    n: int = Field(..., description="Number of runs performed", ge=0)
    successes: Optional[int] = Field(default=None, description="Runs whose verdict was true", ge=0)
    estimate: Optional[float] = Field(default=None, description="Estimated probability", ge=0, le=1)
    decision: Optional[Decision] = Field(default=None, description="Hypothesis test decision")
    log_likelihood_ratio: Optional[float] = Field(default=None, description="Final test statistic")
    mean: Optional[float] = Field(default=None, description="Sample mean")
    stddev: Optional[float] = Field(default=None, description="Sample standard deviation")
    seeds: list[int] = Field(default_factory=list, description="Per-run seeds, in run order")
    wall_time: float = Field(default=0.0, description="Elapsed seconds (not reproducible)", ge=0)
    version: str = Field(default="", description="Tool version")

    @field_validator("seeds")
    @classmethod
    def validate_seeds(cls, v: list[int]) -> list[int]:
        """Seeds are 64-bit unsigned."""
        for seed in v:
            if seed < 0 or seed >= 1 << 64:
                raise ValueError(f"seed out of 64-bit range: {seed}")
        return v

    @property
    def accept_h0(self) -> Optional[bool]:
        if self.decision is None:
            return None
        return self.decision is Decision.ACCEPT_H0

    @property
    def value(self) -> Optional[float]:
        """Headline number: estimate, mean, or 1/0 for an accepted/rejected H0."""
        if self.kind is ResultKind.ESTIMATE:
            return self.estimate
        if self.kind is ResultKind.MEAN:
            return self.mean
        if self.decision is None:
            return None
        return 1.0 if self.accept_h0 else 0.0


class SweepRow(BaseModel):
    """One query result at one value of a swept variable."""

    variable: str = Field(..., description="Swept placeholder or model parameter")
    value: str = Field(..., description="Value of the swept variable")
    query: str = Field(..., description="Query text after substitution")
    kind: ResultKind = Field(..., description="Engine that produced the result")
    result: Optional[float] = Field(default=None, description="Estimate, mean, or 1/0 test outcome")
    n: int = Field(..., description="Number of runs", ge=0)
    master_seed: int = Field(..., description="Master seed", ge=0)
    version: str = Field(default="", description="Tool version")

    @classmethod
    def from_result(cls, variable: str, value: str, result: StatResult) -> "SweepRow":
        return cls(
            variable=variable,
            value=value,
            query=result.query,
            kind=result.kind,
            result=result.value,
            n=result.n,
            master_seed=result.master_seed,
            version=result.version,
        )


class CoverageReport(BaseModel):
    """Outcome of the scheduler-coverage experiment."""

    example: int = Field(..., description="Scheduler example number")
    orders_total: int = Field(..., description="Number of reachable dispatch orders", ge=1)
    runs: int = Field(..., description="Seeded runs per repetition", ge=0)
    repetitions: int = Field(..., description="Number of repetitions", ge=0)
    master_seed: int = Field(..., description="Master seed", ge=0)
    distinct_orders: list[int] = Field(default_factory=list, description="Distinct orders seen, per repetition")
    mean_distinct: float = Field(default=0.0, description="Mean distinct orders per repetition")
    stddev_distinct: float = Field(default=0.0, description="Sample standard deviation of distinct orders")
    expected_distinct: float = Field(default=0.0, description="Expected distinct orders under a uniform scheduler")
    collector_runs: list[int] = Field(default_factory=list, description="Runs until every order was seen, per repetition")
    mean_collector: float = Field(default=0.0, description="Mean runs until every order was seen")
    stddev_collector: float = Field(default=0.0, description="Sample standard deviation of collector runs")
    expected_collector: float = Field(default=0.0, description="Coupon-collector expectation N * H_N")
    exhaustive_orders: Optional[int] = Field(default=None, description="Orders found by exhaustive enumeration")
    version: str = Field(default="", description="Tool version")

    @property
    def coverage(self) -> float:
        """Mean fraction of reachable orders seen in one repetition."""
        return self.mean_distinct / self.orders_total
