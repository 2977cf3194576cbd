"""JSON, table and CSV renderings of query and sweep results."""

import csv
import io
import json
from collections.abc import Sequence
from typing import Any

from rich.console import Console
from rich.table import Table

from smcheck.models.statistics import ResultKind, StatResult, SweepRow
from smcheck.presentation.formatters.base import BaseResultFormatter

SWEEP_COLUMNS = ("variable", "value", "query", "kind", "result", "n", "master_seed", "version")


def result_record(result: StatResult, include_seeds: bool = False, include_timing: bool = True) -> dict[str, Any]:
    """
    JSON-ready dict of a result.

    Args:
        result: Query result
        include_seeds: Keep the per-run seed list
        include_timing: Keep the wall-time field (the only non-reproducible value)
    """
    exclude = set()
    if not include_seeds:
        exclude.add("seeds")
    if not include_timing:
        exclude.add("wall_time")
    record = result.model_dump(mode="json", exclude=exclude)
    record["value"] = result.value
    return record


class ResultJsonFormatter(BaseResultFormatter):
    """One JSON object per line, keys sorted."""

    def __init__(self, include_seeds: bool = False, include_timing: bool = True) -> None:
        self.include_seeds = include_seeds
        self.include_timing = include_timing

    def format(self, results: Sequence[StatResult]) -> str:
        lines = [
            json.dumps(result_record(r, self.include_seeds, self.include_timing), sort_keys=True)
            for r in results
        ]
        return "\n".join(lines) + ("\n" if lines else "")


class ResultTableFormatter(BaseResultFormatter):
    """Rich table with one row per query."""

    def table(self, results: Sequence[StatResult]) -> Table:
        table = Table(title="Query results", show_lines=False)
        table.add_column("Query", style="cyan", overflow="fold")
        table.add_column("Kind")
        table.add_column("Result", justify="right", style="bold")
        table.add_column("Runs", justify="right")
        table.add_column("Time (s)", justify="right", style="dim")
        for result in results:
            table.add_row(
                result.query,
                result.kind.value,
                self._headline(result),
                str(result.n),
                f"{result.wall_time:.2f}",
            )
        return table

    def format(self, results: Sequence[StatResult]) -> str:
        console = Console(record=True, width=120, file=io.StringIO())
        console.print(self.table(results))
        return console.export_text()

    @staticmethod
    def _headline(result: StatResult) -> str:
        if result.kind is ResultKind.ESTIMATE:
            return f"{result.estimate:.4f}"
        if result.kind is ResultKind.MEAN:
            return f"{result.mean:.4f} ± {result.stddev:.4f}"
        return str(result.decision)


class SweepCsvFormatter:
    """CSV table of sweep rows; the header is always present."""

    def format(self, rows: Sequence[SweepRow]) -> str:
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=SWEEP_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow(row.model_dump(mode="json"))
        return buffer.getvalue()
