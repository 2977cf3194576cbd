"""Check service: runs queries, parameter sweeps and plain simulations."""

import math
import re
from collections.abc import Callable, Sequence
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from smcheck.adapters.traces.jsonl import save_trace, to_csv
from smcheck.bltl.grammar import parse_query
from smcheck.bltl.horizon import horizon
from smcheck.casestudies import MODELS
from smcheck.core.statistics import (
    StatisticsError,
    chernoff_sample_size,
    estimate_mean,
    estimate_probability,
    sprt_test,
)
from smcheck.models.config import CheckConfig
from smcheck.models.formula import Estimate, Mean, Query, Test, formula_variables
from smcheck.models.statistics import StatResult, SweepRow
from smcheck.models.trace import Trace
from smcheck.repositories.result_repository import ResultRepository
from smcheck.services.base_service import BaseService
from smcheck.services.runner import MeanRunner, ProbabilityRunner, run_trace
from smcheck.utils.logging import get_logger

logger = get_logger()

_PLACEHOLDER = re.compile(r"\$\{([A-Za-z_][A-Za-z0-9_]*)\}")

# simulation end used by `simulate` when no query bounds the run
DEFAULT_SIMULATION_END = 1000


class SweepError(Exception):
    """The swept variable is neither a query placeholder nor a model parameter."""

    pass


def placeholders(text: str) -> set[str]:
    """Names of the ``${NAME}`` placeholders in a query."""
    return set(_PLACEHOLDER.findall(text))


def substitute(text: str, values: dict[str, str]) -> str:
    """Replace ``${NAME}`` placeholders; unknown names are left untouched."""
    return _PLACEHOLDER.sub(lambda m: values.get(m.group(1), m.group(0)), text)


def simulation_end(queries: Sequence[str]) -> int:
    """Largest time bound of the queries, or DEFAULT_SIMULATION_END when none has one.

    Queries with unsubstituted placeholders are skipped.
    """
    ends = [0]
    for text in queries:
        if placeholders(text):
            continue
        query = parse_query(text)
        if isinstance(query, Mean):
            ends.append(math.ceil(query.horizon))
        else:
            ends.append(math.ceil(horizon(query.formula).time))
    return max(ends) or DEFAULT_SIMULATION_END


class CheckService(BaseService):
    """Service running the queries of a check configuration.

    Each query builds its own run plan (model, observed variables, resolution) and runs
    the engine its kind selects: estimation for ``Pr(...)``, a sequential test for
    ``Pr>=theta(...)`` and mean estimation for ``X<=T(var)``.
    """

    def __init__(
        self,
        config: CheckConfig,
        progress_callback: Callable[[str, dict[str, Any]], None] | None = None,
    ) -> None:
        super().__init__(config, progress_callback)
        self.repository = ResultRepository()

    def check(self) -> list[StatResult]:
        """
        Run every query of the configuration and persist the results.

        Returns:
            Results in query order

        Raises:
            FormulaSyntaxError: If a query does not parse
            ModelError: If the model or its parameters are invalid
            QueryError: If a run fails
            InconclusiveTestError: If a sequential test hits its cap
        """
        self._emit_progress("check_started", queries=len(self.config.queries), model=self.config.model)
        results = [self.run_query(text) for text in self.config.queries]
        self.save(results)
        self._emit_progress("check_completed", queries=len(results))
        return results

    def run_query(self, text: str, config: CheckConfig | None = None) -> StatResult:
        """
        Run one query.

        Args:
            text: Query text
            config: Configuration to use instead of the service's (for sweeps)

        Returns:
            Result carrying the query text and model name
        """
        config = config or self.config
        query = parse_query(text)
        self._emit_progress("query_started", query=text)
        logger.info("query_started", query=text, model=config.model, seed=config.seed)

        result = self._dispatch(query, config)
        result = result.model_copy(update={"query": text, "model": config.model})

        self._emit_progress("query_completed", query=text, value=result.value, n=result.n)
        logger.info("query_completed", query=text, value=result.value, n=result.n)
        return result

    def _dispatch(self, query: Query, config: CheckConfig) -> StatResult:
        params = config.stat_params
        progress = self._run_progress()

        if isinstance(query, Mean):
            plan = self._plan(config, {query.var})
            n_runs = config.runs or chernoff_sample_size(params.delta, params.alpha)
            runner = MeanRunner(plan, query.var, int(query.horizon))
            return estimate_mean(runner, n_runs, params, config.seed, config.jobs, progress)

        formula = query.formula
        plan = self._plan(config, formula_variables(formula))
        probability_runner = ProbabilityRunner.for_formula(plan, formula, config.max_time)
        if isinstance(query, Test):
            try:
                test_params = params.with_theta(query.theta)
            except ValidationError as e:
                raise StatisticsError(f"threshold {query.theta:g}: {e.errors()[0]['msg']}") from e
            return sprt_test(probability_runner, test_params, config.seed, config.jobs, progress)
        assert isinstance(query, Estimate)
        return estimate_probability(probability_runner, params, config.seed, config.jobs, progress)

    def save(self, results: Sequence[StatResult]) -> None:
        """Write results to the configured JSON file and results table."""
        if self.config.results_json is not None:
            self.repository.save_json(results, self.config.results_json)
        if self.config.results_csv is not None:
            self.repository.append_csv(results, self.config.results_csv)

    def sweep(self, variable: str, values: Sequence[str]) -> list[SweepRow]:
        """
        Re-run the queries for each value of a variable.

        ``variable`` is substituted into ``${variable}`` placeholders of the queries when
        any query has one, otherwise it overrides the model parameter of that name.

        Args:
            variable: Placeholder or model parameter name
            values: Values in sweep order

        Returns:
            One row per (value, query)

        Raises:
            SweepError: If the variable resolves to neither
        """
        uses_placeholder = any(variable in placeholders(q) for q in self.config.queries)
        params_type = MODELS[self.config.model][0] if self.config.model in MODELS else None
        if not uses_placeholder and (params_type is None or variable not in params_type.model_fields):
            raise SweepError(
                f"sweep variable {variable!r} is neither a ${{{variable}}} placeholder of a query "
                f"nor a parameter of model {self.config.model!r}"
            )

        rows: list[SweepRow] = []
        self._emit_progress("sweep_started", variable=variable, points=len(values))
        for value in values:
            if uses_placeholder:
                config = self.config
                queries = [substitute(q, {variable: value}) for q in self.config.queries]
            else:
                config = self.config.with_overrides(params={**self.config.params, variable: value})
                queries = list(self.config.queries)
            point = [self.run_query(q, config) for q in queries]
            if self.config.results_csv is not None:
                self.repository.append_csv(point, self.config.results_csv)
            rows.extend(SweepRow.from_result(variable, value, r) for r in point)
            self._emit_progress("sweep_point_completed", variable=variable, value=value)
        logger.info("sweep_completed", variable=variable, points=len(values), rows=len(rows))
        return rows

    def simulate(self, runs: int, until: int | None, dump_dir: Path | None = None) -> list[Trace]:
        """
        Run seeded simulations and collect their full traces.

        Args:
            runs: Number of runs
            until: Simulation end (None uses the largest time bound of the queries)
            dump_dir: Directory receiving ``run_<i>.jsonl`` and ``run_<i>.csv`` per run

        Returns:
            Complete traces in run order
        """
        if until is None:
            until = simulation_end(self.config.queries)
        plan = self._plan(self.config, None)
        dump_dir = dump_dir or self.config.dump_traces
        traces: list[Trace] = []
        for i in range(runs):
            trace = run_trace(plan, self._run_seed(i), until)
            traces.append(trace)
            if dump_dir is not None:
                save_trace(trace, dump_dir / f"run_{i:05d}.jsonl")
                (dump_dir / f"run_{i:05d}.csv").write_text(to_csv(trace))
            self._emit_progress("run_progress", done=i + 1, total=runs)
        logger.info("simulate_completed", runs=runs, until=until, dump_dir=str(dump_dir) if dump_dir else None)
        return traces
