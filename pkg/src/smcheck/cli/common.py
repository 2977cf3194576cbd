"""Shared helpers for CLI commands: config loading and error-to-exit-code mapping."""

from collections.abc import Iterator
from contextlib import contextmanager
from pathlib import Path
from typing import Any

import click

from smcheck.adapters.mag.parsers import ParserError
from smcheck.bltl.evaluator import EvaluationError
from smcheck.bltl.grammar import BltlError, FormulaSyntaxError
from smcheck.casestudies import ModelError
from smcheck.cli.progress import console, print_error
from smcheck.core.config import ConfigError, load_config, validate_config
from smcheck.core.kernel import KernelError
from smcheck.core.monitor import MonitorError
from smcheck.core.statistics import QueryError, StatisticsError
from smcheck.models.config import CheckConfig
from smcheck.models.trace import TraceError
from smcheck.services.check_service import SweepError
from smcheck.utils.logging import bind_context

EXIT_CONFIG = 1
EXIT_RUN = 2

# checked in order: FormulaSyntaxError must win over the broader run errors
EXIT_CODES: tuple[tuple[tuple[type[Exception], ...], int], ...] = (
    ((ConfigError, ParserError, FormulaSyntaxError, SweepError), EXIT_CONFIG),
    (
        (QueryError, KernelError, ModelError, EvaluationError, StatisticsError, MonitorError, TraceError),
        EXIT_RUN,
    ),
    ((BltlError,), EXIT_CONFIG),
)

HANDLED_ERRORS = tuple(exc for group, _ in EXIT_CODES for exc in group)


def exit_code_for(error: Exception) -> int:
    """Exit code a failed command reports for ``error``."""
    for group, code in EXIT_CODES:
        if isinstance(error, group):
            return code
    return EXIT_RUN


@contextmanager
def handle_errors(ctx: click.Context) -> Iterator[None]:
    """Print known errors through the console and exit with their code.

    With ``--debug`` the traceback is printed as well.
    """
    try:
        yield
    except HANDLED_ERRORS as e:
        if ctx.obj and ctx.obj.get("debug"):
            console.print_exception()
        print_error(str(e))
        ctx.exit(exit_code_for(e))


def load_command_config(
    ctx: click.Context,
    config_path: Path | None,
    require_queries: bool = True,
    **overrides: Any,
) -> CheckConfig:
    """
    Load the configuration for a command with the global flags applied.

    Args:
        ctx: Click context carrying the global flags in ``ctx.obj``
        config_path: Configuration file (None starts from defaults)
        require_queries: Treat a config without queries as invalid
        **overrides: Command-specific overrides (None values are skipped)

    Returns:
        Validated configuration

    Raises:
        ConfigError: If loading fails or validation reports issues
    """
    flags = ctx.obj or {}
    merged = {name: flags.get(name) for name in ("seed", "jobs", "delta", "alpha", "beta")}
    merged.update(overrides)
    config = load_config(config_path, overrides=merged)

    issues = validate_config(config)
    if not require_queries:
        issues = [issue for issue in issues if not issue.startswith("No query")]
    if issues:
        raise ConfigError("; ".join(issues))

    bind_context(seed=config.seed, config=str(config_path) if config_path else None)
    return config
