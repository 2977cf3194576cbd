"""End-to-end experiments on the built-in case studies.

These run thousands of simulations each; run them with ``pytest -m slow``.
"""

from collections import Counter

import pytest

from smcheck.casestudies import build_sched_example, run_order
from smcheck.casestudies.ecs import TICKS_PER_DAY, dependability_queries
from smcheck.casestudies.fifo import latency_query
from smcheck.core.rng import RandomSource, derive_seed
from smcheck.core.statistics import chernoff_sample_size, sprt_test
from smcheck.models.config import CheckConfig
from smcheck.models.statistics import Decision, StatParams
from smcheck.services.check_service import CheckService
from smcheck.services.coverage_service import CoverageService
from smcheck.services.runner import RunPlan, run_trace

pytestmark = [pytest.mark.integration, pytest.mark.slow]

# published latency probabilities for T=5000, T1=25, keyed by (p1, p2)
LATENCY_TABLE = {
    ("0.6", "0.3"): 0.0,
    ("0.6", "0.6"): 0.0194,
    ("0.6", "0.9"): 0.0720,
    ("0.9", "0.3"): 0.0,
    ("0.9", "0.6"): 0.0835,
    ("0.9", "0.9"): 1.0,
}


def coin(p: float):  # type: ignore[no-untyped-def]
    def flip(seed: int) -> bool:
        return RandomSource(seed).bernoulli(p)

    return flip


@pytest.mark.parametrize(("p1", "p2"), sorted(LATENCY_TABLE))
def test_latency_table_fast_profile(p1: str, p2: str) -> None:
    config = CheckConfig(
        model="fifo",
        params={"p1": p1, "p2": p2},
        queries=[latency_query(5000, 25)],
        delta=0.05,
        alpha=0.05,
    )
    (result,) = CheckService(config).check()

    assert result.n == 738
    assert result.estimate == pytest.approx(LATENCY_TABLE[(p1, p2)], abs=0.08)


def test_latency_sweep_over_consumer_rate() -> None:
    config = CheckConfig(
        model="fifo",
        params={"p1": "0.9"},
        queries=[latency_query(5000, 25)],
        delta=0.05,
        alpha=0.05,
    )
    rows = CheckService(config).sweep("p2", ["0.3", "0.6", "0.9"])

    for row in rows:
        assert row.result == pytest.approx(LATENCY_TABLE[("0.9", row.value)], abs=0.08)


def test_scheduler_coverage_matches_expectation() -> None:
    report = CoverageService().coverage(example=3, runs=216, repetitions=20, exhaustive=True)

    assert report.exhaustive_orders == 216
    assert 120 <= report.mean_distinct <= 152
    assert 1100 <= report.mean_collector <= 1700


def test_scheduler_is_uniform_over_two_orders() -> None:
    spec = build_sched_example(1)
    counts = Counter(run_order(spec, derive_seed(20150101, i)) for i in range(10_000))

    assert set(counts) == {"AB", "BA"}
    assert 0.48 <= counts["AB"] / 10_000 <= 0.52


@pytest.mark.parametrize(("p", "expected"), [(0.95, Decision.ACCEPT_H0), (0.05, Decision.ACCEPT_H1)])
def test_sequential_test_strength(p: float, expected: Decision) -> None:
    params = StatParams(delta=0.05, alpha=0.01, beta=0.01, theta=0.5)
    decisions = [sprt_test(coin(p), params, derive_seed(7, j)).decision for j in range(1000)]

    assert decisions.count(expected) / 1000 >= 0.99


def test_ecs_rewards_and_reboots() -> None:
    # frequent transient faults so reboot counts are large enough to compare
    plan = RunPlan.build("ecs", {"mean_transient": "100"})
    reboots_i = reboots_o = 0
    for i in range(100):
        trace = run_trace(plan, derive_seed(20150101, i), until=2880)
        for state in trace:
            total = state.value("reward_up") + state.value("reward_danger") + state.value("reward_shutdown")
            assert total == state.time
        last = trace.state(len(trace) - 1)
        assert last.value("reboot_count") == last.value("reboot_count_i") + last.value("reboot_count_o")
        reboots_i += last.value("reboot_count_i")
        reboots_o += last.value("reboot_count_o")

    assert reboots_i > 0
    assert abs(reboots_i - reboots_o) <= 0.1 * max(reboots_i, reboots_o)


def test_latency_curve_is_monotone_in_t1() -> None:
    # every sweep point reuses the same run seeds, so the estimates are exactly monotone
    config = CheckConfig(
        model="fifo",
        params={"p1": "0.9", "p2": "0.9"},
        queries=["Pr(G<=10000((c_read = '&') => (F<=${T1}(c_read = '@'))))"],
        delta=0.05,
        alpha=0.05,
    )
    rows = CheckService(config).sweep("T1", ["10", "14", "18", "22", "25"])
    curve = [row.result for row in rows]

    assert curve == sorted(curve)
    assert curve[0] <= 0.1
    assert curve[-1] >= 0.95


def test_ecs_failure_ordering() -> None:
    horizon = 30 * TICKS_PER_DAY
    config = CheckConfig(
        model="ecs",
        queries=dependability_queries(horizon)[:8],
        delta=0.05,
        alpha=0.05,
        jobs=4,
    )
    results = CheckService(config).check()
    eventual = [r.estimate for r in results[:4]]
    first = [r.estimate for r in results[4:]]

    assert eventual[0] >= eventual[3] + 0.1
    assert eventual[2] >= eventual[3] + 0.1
    assert sum(first) <= 1 + 2 * 0.05 * 4
    assert first[0] == max(first)


def test_ecs_failure_probability_grows_with_horizon() -> None:
    config = CheckConfig(
        model="ecs",
        queries=["Pr(F<=${T}(failure_1))", "Pr(F<=${T}(failure_3))"],
        delta=0.05,
        alpha=0.05,
        jobs=4,
    )
    days = [5, 10, 20, 30]
    rows = CheckService(config).sweep("T", [str(d * TICKS_PER_DAY) for d in days])

    for query_index in range(2):
        curve = [row.result for row in rows[query_index::2]]
        assert curve == sorted(curve)
        assert curve[-1] > curve[0]


@pytest.mark.parametrize(("latency", "expected"), [(25, Decision.ACCEPT_H0), (10, Decision.ACCEPT_H1)])
def test_sequential_test_on_fifo_stops_early_and_soundly(latency: int, expected: Decision) -> None:
    base = CheckConfig(
        model="fifo",
        params={"p1": "0.9", "p2": "0.9"},
        queries=[f"Pr>=0.5(G<=1000((c_read = '&') => (F<={latency}(c_read = '@'))))"],
        delta=0.05,
        alpha=0.05,
        beta=0.05,
    )
    results = [CheckService(base.with_overrides(seed=seed)).check()[0] for seed in range(20)]

    assert sum(r.decision is expected for r in results) >= 19
    assert all(r.n < chernoff_sample_size(0.05, 0.05) for r in results)
