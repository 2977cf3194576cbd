"""Statistical engines: Chernoff-Hoeffding estimation, Wald's SPRT, mean estimation.

Every engine draws run ``i`` with seed ``derive_seed(master_seed, i)`` and aggregates in
index order, so results do not depend on whether runs execute sequentially or in a
process pool.

Sample size for absolute error ``delta`` with confidence ``1 - alpha``::

    n = ceil(ln(2 / alpha) / (2 * delta**2))

Sequential test of H0: p >= p0 = theta + delta against H1: p <= p1 = theta - delta. After
m runs with d successes::

    llr = d * ln(p1 / p0) + (m - d) * ln((1 - p1) / (1 - p0))

H1 is accepted once ``llr >= ln((1 - beta) / alpha)``, H0 once ``llr <= ln(beta / (1 - alpha))``.
"""

import logging
import math
import time
from collections.abc import Callable
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Optional

import numpy as np

from smcheck import __version__
from smcheck.core.rng import derive_seed
from smcheck.models.statistics import Decision, ResultKind, StatParams, StatResult
from smcheck.utils.logging import configure_worker_logging, get_logger

logger = get_logger()

# cap on sequential test length, as a multiple of the Chernoff sample size
SPRT_CAP_FACTOR = 100

Runner = Callable[[int], Any]
ProgressCallback = Callable[[int, Optional[int]], None]


class StatisticsError(Exception):
    """Statistical parameters out of range."""

    pass


class InconclusiveTestError(StatisticsError):
    """The sequential test hit its sample cap without crossing a threshold."""

    pass


class QueryError(Exception):
    """A simulation run failed; carries the seed that reproduces it."""

    def __init__(self, message: str, seed: int | None = None) -> None:
        self.seed = seed
        super().__init__(message)

    def __reduce__(self) -> tuple[Any, ...]:
        return (QueryError, (str(self), self.seed))


def chernoff_sample_size(delta: float, alpha: float) -> int:
    """
    Number of runs for an estimate within ``delta`` with probability ``1 - alpha``.

    Args:
        delta: Absolute error in (0, 1)
        alpha: Confidence complement in (0, 1)

    Returns:
        n = ceil(ln(2/alpha) / (2 delta^2))

    Raises:
        StatisticsError: If a parameter is outside (0, 1)
    """
    if not 0.0 < delta < 1.0:
        raise StatisticsError(f"delta must be in (0, 1), got {delta}")
    if not 0.0 < alpha < 1.0:
        raise StatisticsError(f"alpha must be in (0, 1), got {alpha}")
    return math.ceil(math.log(2.0 / alpha) / (2.0 * delta * delta))


def _run_one(runner: Runner, seed: int) -> Any:
    try:
        return runner(seed)
    except QueryError:
        raise
    except Exception as e:
        raise QueryError(f"run with seed {seed} failed: {e}", seed) from e


class RunExecutor:
    """Executes runner calls for batches of seeds, sequentially or in a process pool.

    Results always come back in seed order.
    """

    def __init__(self, jobs: int = 1) -> None:
        """
        Initialize the executor.

        Args:
            jobs: Worker processes (1 runs in-process)
        """
        if jobs < 1:
            raise StatisticsError(f"jobs must be >= 1, got {jobs}")
        self.jobs = jobs
        self._pool: ProcessPoolExecutor | None = None

    def __enter__(self) -> "RunExecutor":
        if self.jobs > 1:
            # workers stay silent unless the parent logs at DEBUG
            level = logging.DEBUG if logging.getLogger().level <= logging.DEBUG else logging.CRITICAL
            self._pool = ProcessPoolExecutor(
                max_workers=self.jobs, initializer=configure_worker_logging, initargs=(level,)
            )
        return self

    def __exit__(self, *args: Any) -> None:
        if self._pool is not None:
            self._pool.shutdown(cancel_futures=True)
            self._pool = None

    def map(self, runner: Runner, seeds: list[int]) -> list[Any]:
        """
        Run ``runner`` on each seed.

        Raises:
            QueryError: If a run fails (the first failing seed in seed order)
        """
        if self._pool is None:
            return [_run_one(runner, seed) for seed in seeds]
        chunksize = max(1, len(seeds) // (self.jobs * 4))
        return list(self._pool.map(_run_one, [runner] * len(seeds), seeds, chunksize=chunksize))


def _as_bool(value: Any, seed: int) -> bool:
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    raise QueryError(f"run with seed {seed} returned {value!r}, expected a boolean", seed)


def estimate_probability(
    runner: Runner,
    params: StatParams,
    master_seed: int,
    jobs: int = 1,
    progress: ProgressCallback | None = None,
    batch_size: int = 256,
) -> StatResult:
    """
    Estimate the probability that a run satisfies its formula.

    Args:
        runner: Callable mapping a seed to the run's boolean verdict
        params: delta and alpha select the number of runs
        master_seed: Master seed
        jobs: Worker processes
        progress: Optional callback (runs done, runs total)
        batch_size: Seeds handed to the executor at once

    Returns:
        StatResult of kind ESTIMATE

    Raises:
        QueryError: If a run fails
    """
    n = chernoff_sample_size(params.delta, params.alpha)
    seeds = [derive_seed(master_seed, i) for i in range(n)]
    started = time.perf_counter()
    logger.info("estimate_started", runs=n, delta=params.delta, alpha=params.alpha, seed=master_seed)

    successes = 0
    with RunExecutor(jobs) as executor:
        for offset in range(0, n, batch_size):
            batch = seeds[offset : offset + batch_size]
            for seed, value in zip(batch, executor.map(runner, batch)):
                successes += _as_bool(value, seed)
            if progress:
                progress(min(offset + batch_size, n), n)

    estimate = successes / n
    logger.info("estimate_completed", runs=n, successes=successes, estimate=estimate)
    return StatResult(
        kind=ResultKind.ESTIMATE,
        params=params,
        master_seed=master_seed,
        n=n,
        successes=successes,
        estimate=estimate,
        seeds=seeds,
        wall_time=time.perf_counter() - started,
        version=__version__,
    )


class SequentialProbabilityRatioTest:
    """Wald's sequential test for a Bernoulli success probability."""

    def __init__(self, params: StatParams) -> None:
        """
        Initialize the test.

        Args:
            params: Parameters with a threshold set

        Raises:
            StatisticsError: If no threshold is set or the indifference region leaves (0, 1)
        """
        if params.theta is None:
            raise StatisticsError("a sequential test needs a threshold theta")
        self.params = params
        p0, p1 = params.p0, params.p1
        self._success_step = math.log(p1 / p0)
        self._failure_step = math.log((1.0 - p1) / (1.0 - p0))
        self.accept_h1_at = math.log((1.0 - params.beta) / params.alpha)
        self.accept_h0_at = math.log(params.beta / (1.0 - params.alpha))
        self.samples = 0
        self.successes = 0
        self.decision: Decision | None = None

    @property
    def log_likelihood_ratio(self) -> float:
        failures = self.samples - self.successes
        return self.successes * self._success_step + failures * self._failure_step

    def update(self, success: bool) -> Decision | None:
        """
        Add one observation.

        Returns:
            The decision once a threshold is crossed, else None
        """
        if self.decision is not None:
            return self.decision
        self.samples += 1
        self.successes += int(success)
        llr = self.log_likelihood_ratio
        if llr >= self.accept_h1_at:
            self.decision = Decision.ACCEPT_H1
        elif llr <= self.accept_h0_at:
            self.decision = Decision.ACCEPT_H0
        return self.decision


def sprt_test(
    runner: Runner,
    params: StatParams,
    master_seed: int,
    jobs: int = 1,
    progress: ProgressCallback | None = None,
) -> StatResult:
    """
    Test whether the satisfaction probability is at least ``params.theta``.

    Runs are drawn until the likelihood ratio crosses a threshold. In parallel mode runs
    execute in batches but observations are consumed in seed order, so the decision and
    the number of samples used match sequential mode.

    Args:
        runner: Callable mapping a seed to the run's boolean verdict
        params: delta, alpha, beta and theta
        master_seed: Master seed
        jobs: Worker processes
        progress: Optional callback (runs done, None)

    Returns:
        StatResult of kind TEST

    Raises:
        StatisticsError: If the parameters are invalid
        InconclusiveTestError: If 100x the Chernoff sample size is reached
        QueryError: If a run fails
    """
    test = SequentialProbabilityRatioTest(params)
    cap = SPRT_CAP_FACTOR * chernoff_sample_size(params.delta, params.alpha)
    batch_size = 1 if jobs == 1 else jobs * 8
    seeds: list[int] = []
    started = time.perf_counter()
    logger.info("sprt_started", theta=params.theta, delta=params.delta, cap=cap, seed=master_seed)

    with RunExecutor(jobs) as executor:
        while test.decision is None:
            if test.samples >= cap:
                raise InconclusiveTestError(
                    f"no decision after {cap} runs (theta={params.theta}, delta={params.delta}); "
                    "widen the indifference region"
                )
            count = min(batch_size, cap - test.samples)
            batch = [derive_seed(master_seed, test.samples + i) for i in range(count)]
            for seed, value in zip(batch, executor.map(runner, batch)):
                seeds.append(seed)
                if test.update(_as_bool(value, seed)) is not None:
                    break
            if progress:
                progress(test.samples, None)

    logger.info(
        "sprt_completed",
        decision=test.decision.value,
        samples=test.samples,
        successes=test.successes,
    )
    return StatResult(
        kind=ResultKind.TEST,
        params=params,
        master_seed=master_seed,
        n=test.samples,
        successes=test.successes,
        decision=test.decision,
        log_likelihood_ratio=test.log_likelihood_ratio,
        seeds=seeds,
        wall_time=time.perf_counter() - started,
        version=__version__,
    )


def estimate_mean(
    runner: Runner,
    n_runs: int,
    params: StatParams,
    master_seed: int,
    jobs: int = 1,
    progress: ProgressCallback | None = None,
    batch_size: int = 256,
) -> StatResult:
    """
    Estimate the mean of a per-run numeric outcome.

    Args:
        runner: Callable mapping a seed to a number
        n_runs: Number of runs (>= 1)
        params: Recorded with the result
        master_seed: Master seed
        jobs: Worker processes
        progress: Optional callback (runs done, runs total)
        batch_size: Seeds handed to the executor at once

    Returns:
        StatResult of kind MEAN with the mean and sample standard deviation

    Raises:
        StatisticsError: If n_runs < 1
        QueryError: If a run fails
    """
    if n_runs < 1:
        raise StatisticsError(f"n_runs must be >= 1, got {n_runs}")
    seeds = [derive_seed(master_seed, i) for i in range(n_runs)]
    samples = np.empty(n_runs, dtype=np.float64)
    started = time.perf_counter()
    logger.info("mean_started", runs=n_runs, seed=master_seed)

    with RunExecutor(jobs) as executor:
        for offset in range(0, n_runs, batch_size):
            batch = seeds[offset : offset + batch_size]
            for i, (seed, value) in enumerate(zip(batch, executor.map(runner, batch))):
                if isinstance(value, bool) or not isinstance(value, (int, float, np.number)):
                    raise QueryError(f"run with seed {seed} returned {value!r}, expected a number", seed)
                samples[offset + i] = value
            if progress:
                progress(min(offset + batch_size, n_runs), n_runs)

    mean = float(np.mean(samples))
    stddev = float(np.std(samples, ddof=1)) if n_runs > 1 else 0.0
    logger.info("mean_completed", runs=n_runs, mean=mean, stddev=stddev)
    return StatResult(
        kind=ResultKind.MEAN,
        params=params,
        master_seed=master_seed,
        n=n_runs,
        mean=mean,
        stddev=stddev,
        seeds=seeds,
        wall_time=time.perf_counter() - started,
        version=__version__,
    )
