"""Check command: run every query of a configuration."""

from pathlib import Path

import click

from smcheck.cli.common import handle_errors, load_command_config
from smcheck.cli.progress import ProgressTracker, console, print_results_table, print_success
from smcheck.presentation.formatters.results import ResultJsonFormatter
from smcheck.services.check_service import CheckService


@click.command()
@click.argument("config_path", metavar="CONFIG", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option(
    "--results-csv",
    type=click.Path(dir_okay=False, path_type=Path),
    help="Append results to this CSV table",
)
@click.option("--json", "as_json", is_flag=True, default=False, help="Print results as JSON lines")
@click.pass_context
def check(ctx: click.Context, config_path: Path, results_csv: Path | None, as_json: bool) -> None:
    """Run every query of a configuration file.

    \b
    Query kinds:
      • Pr(phi)            estimate the probability that phi holds
      • Pr>=0.9(phi)       sequential test of that probability against 0.9
      • X<=T(var)          estimate the mean of var at time T

    \b
    Examples:
        smcheck check fifo.cfg
        smcheck --delta 0.05 --alpha 0.05 check fifo.cfg
        smcheck --out results.json check ecs.cfg --results-csv table.csv
    """
    with handle_errors(ctx):
        config = load_command_config(
            ctx,
            config_path,
            results_json=ctx.obj.get("out"),
            results_csv=results_csv,
        )

        if not as_json:
            console.print("\n[bold cyan]smcheck[/bold cyan]")
            console.print(f"Model: [yellow]{config.model}[/yellow]  Seed: [yellow]{config.seed}[/yellow]")
            console.print(
                f"δ={config.delta}  α={config.alpha}  β={config.beta}  jobs={config.jobs}\n"
            )

        if as_json:
            results = CheckService(config).check()
            click.echo(ResultJsonFormatter(include_timing=False).format(results), nl=False)
            return

        with ProgressTracker() as tracker:
            results = CheckService(config, progress_callback=tracker.handle_progress).check()

        print_results_table(results)
        print_success(f"{len(results)} quer{'y' if len(results) == 1 else 'ies'} completed")
        if config.results_json is not None:
            console.print(f"Results written to [cyan]{config.results_json}[/cyan]")
        if config.results_csv is not None:
            console.print(f"Results appended to [cyan]{config.results_csv}[/cyan]")
