"""Rich-based progress tracking for CLI commands."""

from collections.abc import Sequence
from typing import Any

import numpy as np
from rich.console import Console
from rich.live import Live
from rich.markup import escape
from rich.progress import (
    BarColumn,
    MofNCompleteColumn,
    Progress,
    SpinnerColumn,
    TaskID,
    TextColumn,
    TimeElapsedColumn,
)
from rich.table import Table

from smcheck.models.statistics import CoverageReport, StatResult
from smcheck.models.trace import Trace
from smcheck.presentation.formatters.results import ResultTableFormatter

console = Console()


class ProgressTracker:
    """Tracks and displays progress for service operations."""

    def __init__(self) -> None:
        """Initialize progress tracker."""
        self.progress = Progress(
            TextColumn("  "),
            SpinnerColumn(),
            TextColumn("[bold blue]{task.description}"),
            BarColumn(),
            MofNCompleteColumn(),
            TimeElapsedColumn(),
            console=console,  # shared with the log handler
        )
        self.tasks: dict[str, TaskID] = {}
        self.current_task: TaskID | None = None
        self.live: Live | None = None

    def __enter__(self) -> "ProgressTracker":
        """Enter context manager."""
        self.live = Live(self.progress, console=console, refresh_per_second=10)
        self.live.__enter__()
        return self

    def __exit__(self, *args: Any) -> None:
        """Exit context manager."""
        if self.live:
            self.live.__exit__(*args)

    def handle_progress(self, event: str, data: dict[str, Any]) -> None:
        """Handle progress event from service layer.

        Args:
            event: Event name
            data: Event data
        """
        if event == "query_started":
            query = str(data.get("query", ""))
            if len(query) > 60:
                query = query[:57] + "..."
            self.current_task = self.progress.add_task(query, total=None)
            return

        if event == "run_progress":
            if self.current_task is None:
                self.current_task = self.progress.add_task("Simulating", total=None)
            self.progress.update(self.current_task, completed=data.get("done", 0), total=data.get("total"))
            return

        if event == "query_completed":
            if self.current_task is not None:
                value = data.get("value")
                suffix = f" → {value:.4f}" if isinstance(value, float) else ""
                task = self.progress.tasks[self.current_task]
                self.progress.update(
                    self.current_task,
                    total=task.completed or 1,
                    completed=task.completed or 1,
                    description=f"[green]✓[/green] {task.description}{suffix}",
                )
            self.current_task = None
            return

        if event == "sweep_point_completed":
            console.print(f"  ✓ {data.get('variable')} = {data.get('value')}")
            return

        if event in ("coverage_repetition_completed", "collector_repetition_completed"):
            key = "coverage" if event.startswith("coverage") else "collector"
            if key not in self.tasks:
                label = "Coverage repetitions" if key == "coverage" else "Coupon collector"
                self.tasks[key] = self.progress.add_task(label, total=data.get("total"))
            self.progress.update(self.tasks[key], completed=data.get("repetition", 0))


def print_results_table(results: Sequence[StatResult]) -> None:
    """Print query results in a formatted table.

    Args:
        results: Results in query order
    """
    console.print()
    console.print(ResultTableFormatter().table(results))
    console.print()


def print_coverage_report(report: CoverageReport) -> None:
    """Print a scheduler-coverage report.

    Args:
        report: Coverage report
    """
    table = Table(title=f"Scheduler coverage, example {report.example}", show_header=False, box=None)
    table.add_column("Metric", style="cyan", no_wrap=True)
    table.add_column("Value", style="bold white")

    table.add_row("Reachable orders", str(report.orders_total))
    if report.exhaustive_orders is not None:
        table.add_row("Orders found by enumeration", str(report.exhaustive_orders))
    table.add_row("Runs per repetition", str(report.runs))
    table.add_row("Repetitions", str(report.repetitions))
    table.add_row(
        "Distinct orders",
        f"{report.mean_distinct:.1f} ± {report.stddev_distinct:.1f} "
        f"(expected {report.expected_distinct:.1f}, coverage {report.coverage:.0%})",
    )
    if report.collector_runs:
        table.add_row(
            "Runs until all orders seen",
            f"{report.mean_collector:.0f} ± {report.stddev_collector:.0f} "
            f"(expected {report.expected_collector:.0f})",
        )
    table.add_row("Master seed", str(report.master_seed))

    console.print()
    console.print(table)
    console.print()


def print_simulation_summary(traces: Sequence[Trace]) -> None:
    """Print final values of each observed variable across simulation runs.

    Args:
        traces: Complete traces, one per run
    """
    if not traces:
        return
    table = Table(title=f"Final values over {len(traces)} runs")
    table.add_column("Variable", style="cyan", no_wrap=True)
    table.add_column("Mean", justify="right", style="bold")
    table.add_column("Min", justify="right")
    table.add_column("Max", justify="right")

    lengths = np.asarray([len(t) for t in traces], dtype=np.float64)
    ends = np.asarray([t.times[-1] if len(t) else 0 for t in traces], dtype=np.float64)
    for name in traces[0].registry.names:
        finals = [t.column(name)[-1] for t in traces if len(t)]
        if not finals:
            continue
        data = np.asarray(finals, dtype=np.float64)
        table.add_row(name, f"{data.mean():.4g}", f"{data.min():.4g}", f"{data.max():.4g}")

    console.print()
    console.print(table)
    console.print(
        f"[dim]samples per run: {lengths.mean():.1f}, last sample time: {ends.mean():.1f} (mean)[/dim]"
    )
    console.print()


def print_error(message: str) -> None:
    """Print an error message.

    Args:
        message: Error message
    """
    console.print(f"[red]✗ Error:[/red] {escape(message)}")


def print_success(message: str) -> None:
    """Print a success message.

    Args:
        message: Success message
    """
    console.print(f"[green]✓[/green] {message}")

