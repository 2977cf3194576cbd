"""Scheduler-coverage experiment.

Counts how many distinct dispatch orders a batch of seeded runs covers, and how many runs
it takes until every order has been seen (coupon collector).
"""

import math
from collections.abc import Callable
from typing import Any

import numpy as np

from smcheck import __version__
from smcheck.casestudies import build_sched_example, enumerate_orders, order_count, run_order
from smcheck.models.config import CheckConfig
from smcheck.models.statistics import CoverageReport
from smcheck.services.base_service import BaseService
from smcheck.utils.logging import get_logger

logger = get_logger()

# coupon-collector repetitions give up after this many multiples of the order count
COLLECTOR_CAP_FACTOR = 100


def expected_distinct(orders: int, runs: int) -> float:
    """Expected distinct orders among ``runs`` uniform draws."""
    return orders * (1.0 - (1.0 - 1.0 / orders) ** runs)


def expected_collector_runs(orders: int) -> float:
    """Coupon-collector expectation ``N * H_N``."""
    return orders * math.fsum(1.0 / i for i in range(1, orders + 1))


def _summary(values: list[int]) -> tuple[float, float]:
    if not values:
        return 0.0, 0.0
    data = np.asarray(values, dtype=np.float64)
    stddev = float(np.std(data, ddof=1)) if len(values) > 1 else 0.0
    return float(np.mean(data)), stddev


class CoverageService(BaseService):
    """Runs the scheduler-coverage experiment on one scheduler example."""

    def __init__(
        self,
        config: CheckConfig | None = None,
        progress_callback: Callable[[str, dict[str, Any]], None] | None = None,
    ) -> None:
        super().__init__(config or CheckConfig(model="sched"), progress_callback)

    def coverage(
        self,
        example: int,
        runs: int,
        repetitions: int,
        collector: bool = True,
        exhaustive: bool = False,
    ) -> CoverageReport:
        """
        Measure scheduler coverage.

        Repetition ``j`` draws run ``i`` with seed ``derive_seed(derive_seed(seed, j), i)``;
        coupon-collector repetition ``j`` uses the seed stream of index ``repetitions + j``.

        Args:
            example: Scheduler example number (1, 2 or 3)
            runs: Seeded runs per repetition
            repetitions: Number of repetitions
            collector: Also run the coupon-collector experiment
            exhaustive: Also count every reachable order by enumeration

        Returns:
            Coverage report

        Raises:
            ModelError: If the example number is invalid
        """
        spec = build_sched_example(example)
        total = order_count(example)
        master_seed = self.config.seed
        self._emit_progress("coverage_started", example=example, runs=runs, repetitions=repetitions)

        distinct: list[int] = []
        for j in range(repetitions):
            seen = {run_order(spec, self._run_seed(i, stream=j)) for i in range(runs)}
            distinct.append(len(seen))
            self._emit_progress(
                "coverage_repetition_completed", repetition=j + 1, total=repetitions, distinct=len(seen)
            )

        collector_runs: list[int] = []
        if collector:
            for j in range(repetitions):
                collector_runs.append(self._collect(spec, repetitions + j, total))
                self._emit_progress(
                    "collector_repetition_completed",
                    repetition=j + 1,
                    total=repetitions,
                    runs=collector_runs[-1],
                )

        mean_distinct, stddev_distinct = _summary(distinct)
        mean_collector, stddev_collector = _summary(collector_runs)
        report = CoverageReport(
            example=example,
            orders_total=total,
            runs=runs,
            repetitions=repetitions,
            master_seed=master_seed,
            distinct_orders=distinct,
            mean_distinct=mean_distinct,
            stddev_distinct=stddev_distinct,
            expected_distinct=expected_distinct(total, runs),
            collector_runs=collector_runs,
            mean_collector=mean_collector,
            stddev_collector=stddev_collector,
            expected_collector=expected_collector_runs(total),
            exhaustive_orders=len(enumerate_orders(example)) if exhaustive else None,
            version=__version__,
        )
        logger.info(
            "coverage_completed",
            example=example,
            mean_distinct=mean_distinct,
            mean_collector=mean_collector,
        )
        return report

    def _collect(self, spec: Any, stream: int, total: int) -> int:
        seen: set[str] = set()
        cap = COLLECTOR_CAP_FACTOR * total
        i = 0
        while len(seen) < total and i < cap:
            seen.add(run_order(spec, self._run_seed(i, stream=stream)))
            i += 1
        if len(seen) < total:
            logger.warning("collector_cap_reached", seen=len(seen), total=total, runs=i)
        return i
