"""Repository for query result persistence."""

import csv
import json
from collections.abc import Sequence
from pathlib import Path
from typing import Any

from smcheck.models.statistics import StatResult
from smcheck.presentation.formatters.results import result_record
from smcheck.utils.logging import get_logger

logger = get_logger()

CSV_COLUMNS = (
    "model",
    "query",
    "kind",
    "value",
    "n",
    "successes",
    "decision",
    "stddev",
    "delta",
    "alpha",
    "beta",
    "theta",
    "master_seed",
    "version",
)


class ResultRepository:
    """Saves results as JSON documents and as rows of a CSV results table."""

    @staticmethod
    def save_json(results: Sequence[StatResult], path: Path, include_seeds: bool = True) -> None:
        """
        Write results as a JSON array.

        Args:
            results: Results in query order
            path: Output file (parent directories are created)
            include_seeds: Keep the per-run seed lists
        """
        path.parent.mkdir(parents=True, exist_ok=True)
        data = [result_record(r, include_seeds=include_seeds) for r in results]
        path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")
        logger.info("results_saved", path=str(path), results=len(results))

    @staticmethod
    def load_json(path: Path) -> list[StatResult]:
        """Read results written by :meth:`save_json`."""
        data = json.loads(path.read_text())
        return [StatResult.model_validate({k: v for k, v in item.items() if k != "value"}) for item in data]

    @staticmethod
    def csv_row(result: StatResult) -> dict[str, Any]:
        return {
            "model": result.model,
            "query": result.query,
            "kind": result.kind.value,
            "value": result.value,
            "n": result.n,
            "successes": result.successes,
            "decision": result.decision.value if result.decision else None,
            "stddev": result.stddev,
            "delta": result.params.delta,
            "alpha": result.params.alpha,
            "beta": result.params.beta,
            "theta": result.params.theta,
            "master_seed": result.master_seed,
            "version": result.version,
        }

    @staticmethod
    def append_csv(results: Sequence[StatResult], path: Path) -> None:
        """
        Append results to a CSV table, writing the header when the file is new.

        Args:
            results: Results to append
            path: Results table
        """
        path.parent.mkdir(parents=True, exist_ok=True)
        new_file = not path.exists() or path.stat().st_size == 0
        with open(path, "a", newline="") as f:
            writer = csv.DictWriter(f, fieldnames=CSV_COLUMNS, lineterminator="\n")
            if new_file:
                writer.writeheader()
            for result in results:
                writer.writerow(ResultRepository.csv_row(result))
        logger.info("results_appended", path=str(path), results=len(results))
