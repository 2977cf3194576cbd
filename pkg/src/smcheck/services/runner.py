"""Per-seed model runners handed to the statistical engines.

Runners are small picklable objects: worker processes rebuild the model from its name and
parameters, so nothing with live kernel state crosses a process boundary.
"""

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import lru_cache

from smcheck.bltl.grammar import BltlError, parse_formula
from smcheck.bltl.horizon import Horizon, horizon
from smcheck.casestudies import ModelSpec, build_model, merge_bindings
from smcheck.casestudies.base import ModelInstance
from smcheck.core.kernel import NOTIFIED_SUFFIX, PHASE_HOOKS
from smcheck.core.monitor import (
    BindingSource,
    MonitoredRun,
    MonitorError,
    ObservedBinding,
    attach,
    normalize_probe_spec,
)
from smcheck.core.statistics import QueryError
from smcheck.models.config import DEFAULT_MAX_TIME
from smcheck.models.formula import Formula, Verdict, formula_variables
from smcheck.models.trace import Trace


@lru_cache(maxsize=32)
def _cached_spec(model: str, params: tuple[tuple[str, str], ...]) -> ModelSpec:
    return build_model(model, dict(params))


def _term_variables(term: str) -> set[str]:
    if term in PHASE_HOOKS or term.endswith(NOTIFIED_SUFFIX):
        return set()
    try:
        normalize_probe_spec(term)
        return set()
    except MonitorError:
        pass
    try:
        return formula_variables(parse_formula(term))
    except BltlError:
        return set()


@dataclass(frozen=True)
class RunPlan:
    """Model, observed variables and temporal resolution of one kind of run."""

    model: str
    params: tuple[tuple[str, str], ...] = ()
    bindings: tuple[ObservedBinding, ...] = ()
    resolution: tuple[str, ...] = ()

    @classmethod
    def build(
        cls,
        model: str,
        params: dict[str, str] | None = None,
        extra_bindings: Sequence[ObservedBinding] = (),
        resolution: Sequence[str] = (),
        needed: Iterable[str] | None = None,
    ) -> "RunPlan":
        """
        Resolve the bindings a run needs.

        Model defaults are merged with ``extra_bindings``. Names in ``needed`` that are
        neither declared nor defaults are bound automatically when they are a kernel phase
        hook (phase flag) or a declared probe location. With ``needed`` given, only the
        bindings it (and the resolution's expression terms) mention are kept.

        Raises:
            ModelError: If the model or its parameters are invalid
        """
        params_key = tuple(sorted((params or {}).items()))
        spec = _cached_spec(model, params_key)
        bindings = list(merge_bindings(spec.bindings, extra_bindings))
        terms = tuple(resolution) or spec.resolution

        if needed is not None:
            wanted = set(needed)
            for term in terms:
                wanted |= _term_variables(term)
            known = {b.name for b in bindings}
            probes = spec.instantiate(0).probes
            for name in sorted(wanted - known):
                if name in PHASE_HOOKS:
                    bindings.append(ObservedBinding(name, BindingSource.PHASE, name))
                elif name in probes:
                    bindings.append(ObservedBinding(name, BindingSource.PROBE, name))
            bindings = [b for b in bindings if b.name in wanted]

        return cls(model, params_key, tuple(bindings), terms)

    @property
    def spec(self) -> ModelSpec:
        return _cached_spec(self.model, self.params)

    def start(self, seed: int, formula: Formula | None = None) -> tuple[ModelInstance, MonitoredRun]:
        """Instantiate the model for ``seed`` and attach the monitor."""
        instance = self.spec.instantiate(seed)
        run = attach(instance, self.bindings, list(self.resolution), formula)
        return instance, run


def run_trace(plan: RunPlan, seed: int, until: int | None = None) -> Trace:
    """Simulate one run up to ``until`` and return its complete trace."""
    instance, run = plan.start(seed)
    instance.kernel.run(until=until)
    run.finish()
    run.trace.metadata.update(seed=seed, resolution=list(plan.resolution), model=plan.model)
    return run.trace


@dataclass(frozen=True)
class ProbabilityRunner:
    """Maps a seed to whether the run satisfies the formula.

    A run ends as soon as the online verdict is decided, and never goes past ``until``.
    With ``strict_cap`` a run cut off at ``until`` before its verdict is decided is an
    error: a step-bounded formula cannot be judged on a prefix. Without it the cap is the
    formula's own time horizon and the samples up to it decide the verdict.
    """

    plan: RunPlan
    formula: Formula
    until: int = DEFAULT_MAX_TIME
    strict_cap: bool = True

    @classmethod
    def for_formula(cls, plan: RunPlan, formula: Formula, max_time: int = DEFAULT_MAX_TIME) -> "ProbabilityRunner":
        """Runner capped at the formula's time horizon, or at ``max_time`` when it has step bounds."""
        until, strict = time_cap(horizon(formula), max_time)
        return cls(plan, formula, until, strict)

    def __call__(self, seed: int) -> bool:
        instance, run = self.plan.start(seed, self.formula)
        instance.kernel.run(until=self.until)
        if self.strict_cap and instance.kernel.cut_off and not run.decided_by_monitor:
            raise QueryError(
                f"run with seed {seed} reached the time cap of {self.until} ticks after "
                f"{len(run.trace)} samples without a verdict (raise max_time or check the "
                f"temporal resolution)",
                seed,
            )
        verdict = run.finish()
        if verdict is Verdict.INCONCLUSIVE:
            raise QueryError(
                f"run with seed {seed} ended after {len(run.trace)} samples without a verdict",
                seed,
            )
        return verdict is Verdict.TRUE


@dataclass(frozen=True)
class MeanRunner:
    """Maps a seed to the value of a variable at the last sample at or before ``horizon``."""

    plan: RunPlan
    var: str
    horizon: int

    def __call__(self, seed: int) -> float:
        instance, run = self.plan.start(seed)
        instance.kernel.run(until=self.horizon)
        run.finish()
        value = run.trace.value_at_or_before(self.var, self.horizon)
        if value is None:
            raise QueryError(
                f"run with seed {seed}: {self.var} was never sampled by time {self.horizon}", seed
            )
        return float(value)


def time_cap(bounds: Horizon, max_time: int = DEFAULT_MAX_TIME) -> tuple[int, bool]:
    """
    Simulation end for a formula horizon.

    Returns:
        ``(until, strict)``: the whole time units of a pure time horizon (not strict),
        otherwise the larger of ``max_time`` and the time component (strict)
    """
    if not bounds.steps:
        return math.floor(bounds.time), False
    return max(max_time, math.ceil(bounds.time)), True
