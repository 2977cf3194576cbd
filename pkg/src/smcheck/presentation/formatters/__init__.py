"""Output formatters for query results."""

from smcheck.presentation.formatters.base import BaseResultFormatter
from smcheck.presentation.formatters.results import (
    ResultJsonFormatter,
    ResultTableFormatter,
    SweepCsvFormatter,
    result_record,
)

__all__ = [
    "BaseResultFormatter",
    "ResultJsonFormatter",
    "ResultTableFormatter",
    "SweepCsvFormatter",
    "result_record",
]
