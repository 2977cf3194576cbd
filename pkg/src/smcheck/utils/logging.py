"""Structured logging setup using structlog.

The console gets rich-rendered records. An optional log file gets one JSON object per
record, so a long check can be grepped by seed or query afterwards. Worker processes of
a parallel check call :func:`configure_worker_logging` before their first run.
"""

import logging
from pathlib import Path
from typing import Any, Optional

import structlog

SHARED_PROCESSORS: list[Any] = [
    structlog.contextvars.merge_contextvars,
    structlog.stdlib.add_log_level,
    structlog.processors.TimeStamper(fmt="iso"),
    structlog.stdlib.PositionalArgumentsFormatter(),
    structlog.processors.StackInfoRenderer(),
]


def setup_logging(verbose: bool = False, log_file: Optional[Path] = None) -> None:
    """
    Configure structlog for the CLI.

    Args:
        verbose: DEBUG and above on the console; otherwise only CRITICAL shows
        log_file: Optional JSON-lines file receiving records at INFO and above
            (DEBUG when verbose)
    """
    console_level = logging.DEBUG if verbose else logging.CRITICAL
    file_level = logging.DEBUG if verbose else logging.INFO

    from rich.logging import RichHandler

    from smcheck.cli.progress import console

    console_handler = RichHandler(
        console=console,
        show_time=False,
        show_path=False,
        markup=False,
        rich_tracebacks=True,
    )
    console_handler.setLevel(console_level)
    console_handler.setFormatter(
        structlog.stdlib.ProcessorFormatter(
            processor=structlog.dev.ConsoleRenderer(colors=False),
            foreign_pre_chain=SHARED_PROCESSORS,
        )
    )
    handlers: list[logging.Handler] = [console_handler]

    if log_file:
        log_file.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(log_file)
        file_handler.setLevel(file_level)
        file_handler.setFormatter(
            structlog.stdlib.ProcessorFormatter(
                processor=structlog.processors.JSONRenderer(),
                foreign_pre_chain=SHARED_PROCESSORS,
            )
        )
        handlers.append(file_handler)

    root = logging.getLogger()
    for handler in root.handlers[:]:
        root.removeHandler(handler)
        handler.close()
    for handler in handlers:
        root.addHandler(handler)
    root.setLevel(min(h.level for h in handlers))

    structlog.configure(
        processors=SHARED_PROCESSORS + [structlog.stdlib.ProcessorFormatter.wrap_for_formatter],
        wrapper_class=structlog.stdlib.BoundLogger,
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        cache_logger_on_first_use=True,
    )


def configure_worker_logging(level: int = logging.WARNING) -> None:
    """Filter structlog in a pool worker to ``level`` (workers never write the log file)."""
    structlog.configure(
        processors=SHARED_PROCESSORS + [structlog.dev.ConsoleRenderer(colors=False)],
        wrapper_class=structlog.make_filtering_bound_logger(level),
        cache_logger_on_first_use=True,
    )


def get_logger(name: Optional[str] = None) -> Any:
    """
    Get a structlog logger instance.

    Args:
        name: Optional logger name

    Returns:
        A structlog BoundLogger instance
    """
    if name:
        return structlog.get_logger(name)
    return structlog.get_logger()


def bind_context(**kwargs: Any) -> None:
    """Replace the context variables merged into every record (seed, config path)."""
    structlog.contextvars.clear_contextvars()
    structlog.contextvars.bind_contextvars(**kwargs)
