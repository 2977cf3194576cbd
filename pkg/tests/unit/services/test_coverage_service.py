"""Tests for CoverageService."""

from typing import Any

import pytest

from smcheck.casestudies.base import ModelError
from smcheck.models.config import CheckConfig
from smcheck.services.coverage_service import (
    CoverageService,
    expected_collector_runs,
    expected_distinct,
)


class TestExpectations:
    """Tests for the closed-form expectations."""

    def test_expected_distinct(self) -> None:
        assert expected_distinct(216, 216) == pytest.approx(136.7, abs=0.1)
        assert expected_distinct(2, 1) == 1.0

    def test_expected_collector_runs(self) -> None:
        assert expected_collector_runs(216) == pytest.approx(1286.2, abs=0.5)
        assert expected_collector_runs(2) == 3.0


class TestCoverage:
    """Tests for CoverageService.coverage."""

    def test_small_example_is_fully_covered(self) -> None:
        report = CoverageService().coverage(example=1, runs=30, repetitions=3, exhaustive=True)

        assert report.orders_total == 2
        assert report.distinct_orders == [2, 2, 2]
        assert report.coverage == 1.0
        assert report.stddev_distinct == 0.0
        assert len(report.collector_runs) == 3
        assert all(runs >= 2 for runs in report.collector_runs)
        assert report.exhaustive_orders == 2
        assert report.master_seed == 20150101

    def test_without_collector(self) -> None:
        report = CoverageService().coverage(example=2, runs=10, repetitions=2, collector=False)

        assert report.collector_runs == []
        assert report.mean_collector == 0.0
        assert report.exhaustive_orders is None
        assert all(1 <= d <= 4 for d in report.distinct_orders)

    def test_seed_changes_outcome_reproducibly(self) -> None:
        service = CoverageService(CheckConfig(model="sched", seed=3))
        first = service.coverage(example=3, runs=40, repetitions=2, collector=False)
        second = service.coverage(example=3, runs=40, repetitions=2, collector=False)

        assert first.distinct_orders == second.distinct_orders
        assert all(d <= 40 for d in first.distinct_orders)

    def test_progress_events(self) -> None:
        events: list[tuple[str, dict[str, Any]]] = []
        CoverageService(progress_callback=lambda e, d: events.append((e, d))).coverage(
            example=1, runs=5, repetitions=2
        )

        names = [name for name, _ in events]
        assert names.count("coverage_repetition_completed") == 2
        assert names.count("collector_repetition_completed") == 2
        assert events[1][1]["total"] == 2

    def test_unknown_example(self) -> None:
        with pytest.raises(ModelError):
            CoverageService().coverage(example=9, runs=1, repetitions=1)
