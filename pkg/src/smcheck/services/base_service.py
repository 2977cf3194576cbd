"""Shared plumbing of the services: progress events, run plans and seed streams."""

from typing import Any, Callable

from smcheck.core.rng import derive_seed
from smcheck.core.statistics import ProgressCallback
from smcheck.models.config import CheckConfig
from smcheck.services.runner import RunPlan
from smcheck.utils.logging import get_logger

logger = get_logger()

EventCallback = Callable[[str, dict[str, Any]], None]


class BaseService:
    """Base class of the check and coverage services.

    Services never print. They report through ``progress_callback(event, data)``,
    where ``data`` always carries the service name, model and master seed.
    """

    def __init__(self, config: CheckConfig, progress_callback: EventCallback | None = None) -> None:
        self.config = config
        self.progress_callback = progress_callback
        self.service_name = self.__class__.__name__
        self.log = logger.bind(service=self.service_name, model=config.model, seed=config.seed)
        self.log.debug("service_initialized", has_progress_callback=progress_callback is not None)

    def _emit_progress(self, event: str, **kwargs: Any) -> None:
        """
        Send an event to the progress callback and the debug log.

        A failing callback is logged and otherwise ignored.

        Args:
            event: Event name (e.g. "query_started", "run_progress")
            **kwargs: Event data
        """
        if self.progress_callback:
            data = {"service": self.service_name, "model": self.config.model, "seed": self.config.seed, **kwargs}
            try:
                self.progress_callback(event, data)
            except Exception as e:
                self.log.warning("progress_callback_error", event_name=event, error=str(e))
        self.log.debug("progress_event", event_name=event, data=kwargs)

    def _run_progress(self, **context: Any) -> ProgressCallback:
        """Engine progress hook forwarding ``(done, total)`` as ``run_progress`` events."""

        def report(done: int, total: int | None) -> None:
            self._emit_progress("run_progress", done=done, total=total, **context)

        return report

    def _run_seed(self, index: int, stream: int | None = None) -> int:
        """Seed of run ``index``, optionally inside sub-stream ``stream`` of the master seed."""
        base = self.config.seed if stream is None else derive_seed(self.config.seed, stream)
        return derive_seed(base, index)

    @staticmethod
    def _plan(config: CheckConfig, needed: set[str] | None) -> RunPlan:
        """Resolve a config into a run plan observing ``needed`` (None observes everything)."""
        return RunPlan.build(config.model, config.params, config.bindings(), config.resolution, needed)
