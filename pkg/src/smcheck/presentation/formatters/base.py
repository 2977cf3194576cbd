"""Base formatter interface for query results."""

from abc import ABC, abstractmethod
from collections.abc import Sequence

from smcheck.models.statistics import StatResult


class BaseResultFormatter(ABC):
    """Base class for query result formatters."""

    @abstractmethod
    def format(self, results: Sequence[StatResult]) -> str:
        """Format query results.

        Args:
            results: Results in query order

        Returns:
            Formatted output string
        """
        pass
