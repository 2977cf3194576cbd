"""Sweep command: re-run the queries over a list of values."""

from pathlib import Path

import click

from smcheck.cli.common import handle_errors, load_command_config
from smcheck.cli.progress import ProgressTracker, console, print_success
from smcheck.presentation.formatters.results import SweepCsvFormatter
from smcheck.services.check_service import CheckService


def parse_values(raw: str) -> list[str]:
    """Split a comma-separated value list, dropping empty items."""
    return [item.strip() for item in raw.split(",") if item.strip()]


@click.command()
@click.argument("config_path", metavar="CONFIG", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--var", "variable", required=True, help="Query placeholder ${NAME} or model parameter")
@click.option("--values", "raw_values", required=True, help="Comma-separated values, e.g. 5,10,15")
@click.option(
    "--results-csv",
    type=click.Path(dir_okay=False, path_type=Path),
    help="Also append every result to this CSV table",
)
@click.pass_context
def sweep(
    ctx: click.Context,
    config_path: Path,
    variable: str,
    raw_values: str,
    results_csv: Path | None,
) -> None:
    """Re-run the queries of CONFIG for each value of a variable.

    The variable is substituted into ${VAR} placeholders of the queries
    when any query has one; otherwise it overrides the model parameter of
    that name. Writes one CSV row per (value, query) to --out, or to
    standard output.

    \b
    Examples:
        smcheck sweep fifo.cfg --var T1 --values 5,10,15,20,25,30
        smcheck --out p2.csv sweep fifo.cfg --var p2 --values 0.3,0.6,0.9
    """
    out: Path | None = ctx.obj.get("out")
    values = parse_values(raw_values)

    with handle_errors(ctx):
        config = load_command_config(ctx, config_path, results_csv=results_csv)

        if out is None:
            rows = CheckService(config).sweep(variable, values)
            click.echo(SweepCsvFormatter().format(rows), nl=False)
            return

        console.print(f"\n[bold cyan]Sweeping {variable}[/bold cyan] over {len(values)} values\n")
        with ProgressTracker() as tracker:
            rows = CheckService(config, progress_callback=tracker.handle_progress).sweep(variable, values)

        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(SweepCsvFormatter().format(rows))
        print_success(f"{len(rows)} rows written to {out}")
