"""Main CLI entry point for smcheck."""

from pathlib import Path

import click

from smcheck import __version__
from smcheck.cli.commands import check, sched_coverage, simulate, sweep
from smcheck.utils.logging import setup_logging


@click.group()
@click.version_option(version=__version__, prog_name="smcheck")
@click.help_option("-h", "--help")
@click.option("--seed", type=click.IntRange(min=0), default=None, help="Master seed")
@click.option("--jobs", type=click.IntRange(min=1), default=None, help="Worker processes")
@click.option("--delta", type=float, default=None, help="Absolute error / indifference half-width")
@click.option("--alpha", type=float, default=None, help="Type-I error bound")
@click.option("--beta", type=float, default=None, help="Type-II error bound")
@click.option(
    "--out",
    "-o",
    type=click.Path(dir_okay=False, path_type=Path),
    default=None,
    help="Output file (result JSON for check, CSV for sweep)",
)
@click.option(
    "--debug",
    is_flag=True,
    help="Enable debug logging (shows all logs and tracebacks)",
)
@click.option(
    "--log-file",
    type=click.Path(dir_okay=False, path_type=Path),
    default=None,
    help="Also write log records to this file",
)
@click.pass_context
def cli(
    ctx: click.Context,
    seed: int | None,
    jobs: int | None,
    delta: float | None,
    alpha: float | None,
    beta: float | None,
    out: Path | None,
    debug: bool,
    log_file: Path | None,
) -> None:
    """smcheck - statistical model checking of discrete-event models.

    Simulates a model many times under seeded schedules, checks a bounded
    temporal-logic property on each run and estimates the probability that
    it holds (or tests it against a threshold).

    \b
    Quick Start:
        smcheck check fifo.cfg                         # Run every query of a config
        smcheck sweep fifo.cfg --var T1 --values 5,10,15,20,25
        smcheck sched-coverage --example 3 --runs 216 --reps 20
        smcheck simulate ecs.cfg --runs 5 --until 2880 --dump-traces traces/

    \b
    Global flags override the config file, which overrides the user
    defaults in ~/.smcheck/config.yaml (or $SMCHECK_HOME).

    \b
    Short alias: smc
    """
    setup_logging(verbose=debug, log_file=log_file)

    ctx.ensure_object(dict)
    ctx.obj.update(seed=seed, jobs=jobs, delta=delta, alpha=alpha, beta=beta, out=out, debug=debug)


cli.add_command(check.check)
cli.add_command(sweep.sweep)
cli.add_command(sched_coverage.sched_coverage)
cli.add_command(simulate.simulate)


if __name__ == "__main__":
    cli()
