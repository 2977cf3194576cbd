"""Simulate command: seeded runs with trace export."""

from pathlib import Path

import click

from smcheck.cli.common import handle_errors, load_command_config
from smcheck.cli.progress import ProgressTracker, console, print_simulation_summary, print_success
from smcheck.services.check_service import CheckService


@click.command()
@click.argument("config_path", metavar="CONFIG", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--runs", "-n", type=click.IntRange(min=1), default=1, show_default=True, help="Number of runs")
@click.option(
    "--until",
    type=click.IntRange(min=0),
    default=None,
    help="Simulation end in model time units (default: largest query bound, or 1000)",
)
@click.option(
    "--dump-traces",
    type=click.Path(file_okay=False, path_type=Path),
    default=None,
    help="Write run_<i>.jsonl and run_<i>.csv per run to this directory",
)
@click.pass_context
def simulate(
    ctx: click.Context,
    config_path: Path,
    runs: int,
    until: int | None,
    dump_traces: Path | None,
) -> None:
    """Run seeded simulations of the model in CONFIG without checking.

    Observed variables and the temporal resolution come from CONFIG; the
    dumped JSONL traces can be checked offline.

    \b
    Examples:
        smcheck simulate fifo.cfg --runs 3 --until 500
        smcheck --seed 42 simulate ecs.cfg -n 10 --dump-traces traces/
    """
    with handle_errors(ctx):
        config = load_command_config(ctx, config_path, require_queries=False, dump_traces=dump_traces)

        console.print(f"\n[bold cyan]Simulating {config.model}[/bold cyan] ({runs} runs)\n")
        with ProgressTracker() as tracker:
            traces = CheckService(config, progress_callback=tracker.handle_progress).simulate(runs, until)

        print_simulation_summary(traces)
        if config.dump_traces is not None:
            print_success(f"{len(traces)} traces written to {config.dump_traces}")
