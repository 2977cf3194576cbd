"""Tests for the statistical engines."""

from dataclasses import dataclass

import pytest
from pydantic import ValidationError

from smcheck.core import statistics
from smcheck.core.rng import RandomSource, derive_seed
from smcheck.core.statistics import (
    InconclusiveTestError,
    QueryError,
    SequentialProbabilityRatioTest,
    StatisticsError,
    chernoff_sample_size,
    estimate_mean,
    estimate_probability,
    sprt_test,
)
from smcheck.models.statistics import Decision, ResultKind, StatParams

SEED = 20150101


@dataclass(frozen=True)
class Coin:
    """Biased coin: one Bernoulli draw per seed."""

    p: float

    def __call__(self, seed: int) -> bool:
        return RandomSource(seed).bernoulli(self.p)


@dataclass(frozen=True)
class Exponential:
    mean: float

    def __call__(self, seed: int) -> float:
        return RandomSource(seed).exponential(self.mean)


class TestChernoff:
    """Tests for the Chernoff-Hoeffding sample size."""

    @pytest.mark.parametrize(
        ("delta", "alpha", "n"),
        [(0.02, 0.02, 5757), (0.05, 0.05, 738), (0.5, 0.5, 3)],
    )
    def test_sample_size(self, delta: float, alpha: float, n: int) -> None:
        assert chernoff_sample_size(delta, alpha) == n

    @pytest.mark.parametrize(("delta", "alpha"), [(0.0, 0.1), (1.0, 0.1), (0.1, 0.0), (0.1, 1.5)])
    def test_rejects_out_of_range(self, delta: float, alpha: float) -> None:
        with pytest.raises(StatisticsError):
            chernoff_sample_size(delta, alpha)


class TestEstimateProbability:
    """Tests for probability estimation."""

    def test_estimate_close_to_bias(self) -> None:
        params = StatParams(delta=0.05, alpha=0.05)
        result = estimate_probability(Coin(0.3), params, SEED)

        assert result.kind is ResultKind.ESTIMATE
        assert result.n == 738
        assert result.successes is not None
        assert result.estimate == result.successes / 738
        assert abs(result.estimate - 0.3) < 0.1

    def test_seeds_derive_from_master(self) -> None:
        result = estimate_probability(Coin(0.5), StatParams(delta=0.2, alpha=0.2), SEED)
        assert result.seeds == [derive_seed(SEED, i) for i in range(result.n)]
        assert result.master_seed == SEED

    def test_reproducible(self) -> None:
        params = StatParams(delta=0.1, alpha=0.1)
        first = estimate_probability(Coin(0.4), params, 7)
        second = estimate_probability(Coin(0.4), params, 7)
        assert first.successes == second.successes

    def test_deterministic_extremes(self) -> None:
        params = StatParams(delta=0.1, alpha=0.1)
        assert estimate_probability(Coin(1.0), params, SEED).estimate == 1.0
        assert estimate_probability(Coin(0.0), params, SEED).estimate == 0.0

    def test_parallel_matches_sequential(self) -> None:
        params = StatParams(delta=0.1, alpha=0.1)
        sequential = estimate_probability(Coin(0.4), params, SEED, jobs=1)
        parallel = estimate_probability(Coin(0.4), params, SEED, jobs=2, batch_size=32)
        assert parallel.successes == sequential.successes
        assert parallel.seeds == sequential.seeds

    def test_progress_reports_total(self) -> None:
        calls: list[tuple[int, int | None]] = []
        estimate_probability(
            Coin(0.5),
            StatParams(delta=0.05, alpha=0.05),
            SEED,
            progress=lambda done, total: calls.append((done, total)),
            batch_size=256,
        )
        assert calls == [(256, 738), (512, 738), (738, 738)]

    def test_failing_run_carries_seed(self) -> None:
        def runner(seed: int) -> bool:
            raise RuntimeError("model crashed")

        with pytest.raises(QueryError) as exc_info:
            estimate_probability(runner, StatParams(delta=0.2, alpha=0.2), SEED)
        assert exc_info.value.seed == derive_seed(SEED, 0)

    def test_non_boolean_run(self) -> None:
        with pytest.raises(QueryError, match="expected a boolean"):
            estimate_probability(lambda seed: 1, StatParams(delta=0.2, alpha=0.2), SEED)


class TestSprt:
    """Tests for the sequential probability ratio test."""

    def test_accepts_h0_for_likely_property(self) -> None:
        params = StatParams(delta=0.02, alpha=0.02, beta=0.02, theta=0.5)
        result = sprt_test(Coin(0.9), params, SEED)

        assert result.kind is ResultKind.TEST
        assert result.decision is Decision.ACCEPT_H0
        assert result.accept_h0 is True
        assert result.value == 1.0
        assert result.n < chernoff_sample_size(0.02, 0.02)

    def test_accepts_h1_for_unlikely_property(self) -> None:
        params = StatParams(delta=0.02, alpha=0.02, beta=0.02, theta=0.5)
        result = sprt_test(Coin(0.1), params, SEED)

        assert result.decision is Decision.ACCEPT_H1
        assert result.value == 0.0

    def test_certain_property_decides_quickly(self) -> None:
        params = StatParams(delta=0.05, alpha=0.01, beta=0.01, theta=0.5)
        result = sprt_test(Coin(1.0), params, SEED)

        assert result.decision is Decision.ACCEPT_H0
        assert result.successes == result.n
        assert result.n == 23

    def test_parallel_matches_sequential(self) -> None:
        params = StatParams(delta=0.05, alpha=0.05, beta=0.05, theta=0.5)
        sequential = sprt_test(Coin(0.6), params, SEED, jobs=1)
        parallel = sprt_test(Coin(0.6), params, SEED, jobs=2)

        assert parallel.decision == sequential.decision
        assert parallel.n == sequential.n
        assert parallel.seeds == sequential.seeds

    def test_error_rates_are_calibrated(self) -> None:
        """Test that a coin just inside H0 is rarely rejected over many master seeds."""
        params = StatParams(delta=0.1, alpha=0.05, beta=0.05, theta=0.5)
        rejections = sum(
            sprt_test(Coin(0.6), params, derive_seed(SEED, j)).decision is Decision.ACCEPT_H1
            for j in range(200)
        )
        assert rejections / 200 <= 0.1

    def test_cap_raises_inconclusive(self, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setattr(statistics, "SPRT_CAP_FACTOR", 0)
        params = StatParams(delta=0.05, alpha=0.05, beta=0.05, theta=0.5)
        with pytest.raises(InconclusiveTestError, match="no decision"):
            sprt_test(Coin(0.5), params, SEED)

    def test_requires_threshold(self) -> None:
        with pytest.raises(StatisticsError, match="threshold"):
            SequentialProbabilityRatioTest(StatParams())

    def test_indifference_region_must_fit(self) -> None:
        with pytest.raises(ValidationError):
            StatParams(delta=0.05, theta=0.03)

    def test_thresholds(self) -> None:
        test = SequentialProbabilityRatioTest(StatParams(delta=0.1, alpha=0.05, beta=0.05, theta=0.5))
        assert test.accept_h1_at == pytest.approx(2.944, abs=1e-3)
        assert test.accept_h0_at == pytest.approx(-2.944, abs=1e-3)


class TestEstimateMean:
    """Tests for mean estimation."""

    def test_mean_and_stddev(self) -> None:
        result = estimate_mean(Exponential(4.0), 2000, StatParams(), SEED)

        assert result.kind is ResultKind.MEAN
        assert result.n == 2000
        assert result.mean == pytest.approx(4.0, abs=0.4)
        assert result.stddev == pytest.approx(4.0, abs=0.5)
        assert result.value == result.mean

    def test_single_run_has_zero_stddev(self) -> None:
        result = estimate_mean(lambda seed: 3, 1, StatParams(), SEED)
        assert result.mean == 3.0
        assert result.stddev == 0.0

    def test_rejects_zero_runs(self) -> None:
        with pytest.raises(StatisticsError):
            estimate_mean(Exponential(1.0), 0, StatParams(), SEED)

    def test_rejects_boolean_outcome(self) -> None:
        with pytest.raises(QueryError, match="expected a number"):
            estimate_mean(lambda seed: True, 3, StatParams(), SEED)
