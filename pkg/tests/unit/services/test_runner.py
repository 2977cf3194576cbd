"""Tests for the per-seed runners."""

from fractions import Fraction

import pytest

from smcheck.bltl.grammar import parse_formula
from smcheck.bltl.horizon import Horizon
from smcheck.core.statistics import QueryError
from smcheck.models.config import DEFAULT_MAX_TIME
from smcheck.services.runner import ProbabilityRunner, RunPlan, time_cap


class TestTimeCap:
    """Tests for time_cap."""

    def test_time_bounded_formula_stops_at_its_horizon(self) -> None:
        assert time_cap(Horizon(0, Fraction(25, 2))) == (12, False)

    def test_step_bounded_formula_gets_the_configured_cap(self) -> None:
        assert time_cap(Horizon(5, Fraction(0)), max_time=300) == (300, True)
        assert time_cap(Horizon(5, Fraction(0))) == (DEFAULT_MAX_TIME, True)

    def test_mixed_formula_covers_its_time_horizon(self) -> None:
        assert time_cap(Horizon(5, Fraction(1001, 2)), max_time=300) == (501, True)


class TestProbabilityRunner:
    """Tests for ProbabilityRunner."""

    def test_step_bound_under_a_silent_resolution_hits_the_cap(self) -> None:
        # with p1 = 0 the producer never calls send(), so no sample is ever taken
        plan = RunPlan.build("fifo", {"p1": "0"}, resolution=["send:call"], needed={"c_read"})
        runner = ProbabilityRunner.for_formula(plan, parse_formula("F<=#5(c_read = 72)"), max_time=50)

        with pytest.raises(QueryError, match="time cap of 50") as exc_info:
            runner(3)
        assert exc_info.value.seed == 3

    def test_step_bound_decided_before_the_cap(self) -> None:
        plan = RunPlan.build("fifo", {"p1": "1", "p2": "1"}, needed={"c_read"})
        runner = ProbabilityRunner.for_formula(plan, parse_formula("F<=#30(c_read = '@')"), max_time=50)

        assert runner.until == 50
        assert runner.strict_cap
        assert runner(0)

    def test_time_bounded_runner_is_not_strict(self) -> None:
        plan = RunPlan.build("fifo", {"p1": "0"}, resolution=["send:call"], needed={"c_read"})
        runner = ProbabilityRunner.for_formula(plan, parse_formula("F<=20(c_read = 72)"))

        assert (runner.until, runner.strict_cap) == (20, False)
        with pytest.raises(QueryError, match="after 0 samples without a verdict"):
            runner(0)
