"""Scheduler-coverage command."""

import json

import click

from smcheck.cli.common import handle_errors, load_command_config
from smcheck.cli.progress import ProgressTracker, print_coverage_report
from smcheck.models.statistics import CoverageReport
from smcheck.services.coverage_service import CoverageService


@click.command(name="sched-coverage")
@click.option("--example", "-k", type=click.IntRange(1, 3), default=3, show_default=True, help="Scheduler example")
@click.option("--runs", "-m", type=click.IntRange(min=1), default=216, show_default=True, help="Runs per repetition")
@click.option("--reps", "-r", type=click.IntRange(min=1), default=20, show_default=True, help="Repetitions")
@click.option("--exhaustive", is_flag=True, default=False, help="Also count reachable orders by enumeration")
@click.option("--no-collector", is_flag=True, default=False, help="Skip the coupon-collector experiment")
@click.option("--json", "as_json", is_flag=True, default=False, help="Print the report as JSON")
@click.pass_context
def sched_coverage(
    ctx: click.Context,
    example: int,
    runs: int,
    reps: int,
    exhaustive: bool,
    no_collector: bool,
    as_json: bool,
) -> None:
    """Measure how many dispatch orders the random scheduler covers.

    Each repetition runs the scheduler example with RUNS seeds and counts
    the distinct dispatch orders; the coupon-collector experiment counts
    runs until every reachable order has been seen.

    \b
    Examples:
        smcheck sched-coverage --example 3 --runs 216 --reps 20
        smcheck --seed 7 sched-coverage -k 1 -m 100 -r 5 --exhaustive
    """
    with handle_errors(ctx):
        config = load_command_config(ctx, None, require_queries=False, model="sched")

        def run(service: CoverageService) -> CoverageReport:
            return service.coverage(example, runs, reps, collector=not no_collector, exhaustive=exhaustive)

        if as_json:
            report = run(CoverageService(config))
            click.echo(json.dumps(report.model_dump(mode="json"), sort_keys=True))
            return

        with ProgressTracker() as tracker:
            report = run(CoverageService(config, progress_callback=tracker.handle_progress))

        print_coverage_report(report)
