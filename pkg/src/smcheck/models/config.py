"""Pydantic configuration models for smcheck."""

from pathlib import Path
from typing import Any, Optional

from pydantic import BaseModel, Field, field_validator

from smcheck.core.monitor import BindingSource, ObservedBinding
from smcheck.models.statistics import StatParams
from smcheck.models.trace import VarKind

DEFAULT_SEED = 20150101

# simulation time cap, in ticks, for runs of step-bounded formulas
DEFAULT_MAX_TIME = 100_000


class ObservedDecl(BaseModel):
    """One observed-variable directive of a check configuration."""

    name: str = Field(..., description="Variable name used in formulas")
    source: BindingSource = Field(..., description="attribute, probe, phase or event")
    target: str = Field(..., description="Accessor path, probe location, phase hook or event name")

    def to_binding(self, kind: Optional[VarKind] = None) -> ObservedBinding:
        return ObservedBinding(self.name, self.source, self.target, kind)


class CheckConfig(BaseModel):
    """Everything needed to run a batch of queries against one model."""

    model: str = Field(default="fifo", description="Registered model name")
    params: dict[str, str] = Field(default_factory=dict, description="Model parameter overrides")
    observed: list[ObservedDecl] = Field(default_factory=list, description="Observed variables")
    att_types: dict[str, VarKind] = Field(default_factory=dict, description="Declared variable types")
    resolution: list[str] = Field(default_factory=list, description="Temporal resolution terms")
    queries: list[str] = Field(default_factory=list, description="Query texts")
    delta: float = Field(default=0.02, description="Absolute error / indifference half-width", gt=0, lt=1)
    alpha: float = Field(default=0.02, description="Type-I error bound", gt=0, lt=1)
    beta: float = Field(default=0.02, description="Type-II error bound", gt=0, lt=1)
    seed: int = Field(default=DEFAULT_SEED, description="Master seed", ge=0, lt=1 << 64)
    jobs: int = Field(default=1, description="Worker processes", ge=1)
    runs: Optional[int] = Field(default=None, description="Runs per mean query (default: Chernoff n)", ge=1)
    max_time: int = Field(
        default=DEFAULT_MAX_TIME, description="Time cap for runs of step-bounded formulas", ge=1
    )
    results_json: Optional[Path] = Field(default=None, description="Where to write result JSON")
    results_csv: Optional[Path] = Field(default=None, description="Results table to append to")
    dump_traces: Optional[Path] = Field(default=None, description="Directory for per-run JSONL traces")
    source: Optional[Path] = Field(default=None, description="File the config was read from", exclude=True)

    @field_validator("resolution")
    @classmethod
    def validate_resolution(cls, v: list[str]) -> list[str]:
        """Strip whitespace around terms and drop empty ones."""
        return [term.strip() for term in v if term.strip()]

    @property
    def stat_params(self) -> StatParams:
        return StatParams(delta=self.delta, alpha=self.alpha, beta=self.beta)

    def bindings(self) -> list[ObservedBinding]:
        """Observed declarations as monitor bindings, typed by ``att_type`` directives."""
        return [decl.to_binding(self.att_types.get(decl.name)) for decl in self.observed]

    def with_overrides(self, **overrides: Any) -> "CheckConfig":
        """Copy with non-None overrides applied (validated)."""
        data = self.model_dump()
        data.update({k: v for k, v in overrides.items() if v is not None})
        data["source"] = self.source
        return CheckConfig.model_validate(data)
