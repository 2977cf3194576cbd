"""Configuration hierarchy and loading with environment variable support."""

import os
from pathlib import Path
from typing import Any, Optional

from pydantic import ValidationError

from smcheck.adapters.mag.parsers import MagConfigParser, ParserError
from smcheck.bltl.grammar import FormulaSyntaxError, parse_query
from smcheck.casestudies import MODELS, ModelError, build_model
from smcheck.core.kernel import NOTIFIED_SUFFIX, PHASE_HOOKS
from smcheck.core.monitor import BindingSource, MonitorError, normalize_probe_spec
from smcheck.core.user_config import load_user_config
from smcheck.models.config import CheckConfig
from smcheck.models.formula import Test
from smcheck.utils.logging import get_logger

logger = get_logger()

# environment variable -> (config field, parser)
ENV_OVERRIDES: dict[str, tuple[str, type]] = {
    "SMCHECK_SEED": ("seed", int),
    "SMCHECK_JOBS": ("jobs", int),
    "SMCHECK_DELTA": ("delta", float),
    "SMCHECK_ALPHA": ("alpha", float),
    "SMCHECK_BETA": ("beta", float),
}


class ConfigError(Exception):
    """Configuration loading or validation error."""

    pass


def load_config(
    config_path: Optional[Path] = None,
    overrides: Optional[dict[str, Any]] = None,
) -> CheckConfig:
    """
    Load configuration with hierarchy: CLI args > env vars > file > user config > defaults.

    Priority order (highest to lowest):
    1. Explicit ``overrides`` (command-line flags; None values are skipped)
    2. Environment variables (SMCHECK_SEED, SMCHECK_JOBS, SMCHECK_DELTA, SMCHECK_ALPHA, SMCHECK_BETA)
    3. Directives of the configuration file
    4. User-level defaults (~/.smcheck/config.yaml) for what the file leaves unset
    5. Built-in defaults

    Args:
        config_path: Optional configuration file (None starts from defaults)
        overrides: Optional field overrides

    Returns:
        Loaded CheckConfig instance

    Raises:
        ConfigError: If configuration cannot be loaded or is invalid
    """
    if config_path is None:
        config = CheckConfig()
    else:
        try:
            config = MagConfigParser().parse_file(config_path)
        except ParserError as e:
            raise ConfigError(f"Failed to load configuration from {config_path}: {e}") from e

    try:
        config = _apply_user_defaults(config)
        config = _apply_env_overrides(config)
        config = config.with_overrides(**(overrides or {}))
    except ValidationError as e:
        raise ConfigError(f"Invalid configuration value: {e}") from e

    logger.debug(
        "config_loaded",
        path=str(config_path) if config_path else None,
        seed=config.seed,
        jobs=config.jobs,
        delta=config.delta,
        alpha=config.alpha,
    )
    return config


def _apply_user_defaults(config: CheckConfig) -> CheckConfig:
    """Fill fields the file did not set from the user-level config."""
    user_config = load_user_config()
    if user_config is None:
        return config
    unset = {
        name: value
        for name, value in user_config.defaults().items()
        if name not in config.model_fields_set
    }
    return config.with_overrides(**unset) if unset else config


def _apply_env_overrides(config: CheckConfig) -> CheckConfig:
    """
    Apply environment variable overrides to configuration.

    Invalid values are ignored.

    Args:
        config: Base configuration to override

    Returns:
        Configuration with environment variable overrides applied
    """
    overrides: dict[str, Any] = {}
    for variable, (field, parse) in ENV_OVERRIDES.items():
        if raw := os.getenv(variable):
            try:
                overrides[field] = parse(raw)
            except ValueError:
                logger.debug("env_override_ignored", variable=variable, value=raw)
    if not overrides:
        return config
    try:
        return config.with_overrides(**overrides)
    except ValidationError:
        logger.debug("env_overrides_ignored", overrides=overrides)
        return config


def validate_config(config: CheckConfig) -> list[str]:
    """
    Validate configuration and return list of issues.

    Args:
        config: Configuration to validate

    Returns:
        List of validation error messages (empty if valid)
    """
    issues = []

    if not config.queries:
        issues.append("No query given; add at least one 'formula' directive")

    for text in config.queries:
        if "${" in text:
            continue
        try:
            query = parse_query(text)
        except FormulaSyntaxError as e:
            issues.append(f"Query {text}: {e}")
            continue
        if isinstance(query, Test):
            try:
                config.stat_params.with_theta(query.theta)
            except ValidationError as e:
                issues.append(f"Query {text}: {e.errors()[0]['msg']}")

    if config.model not in MODELS:
        issues.append(f"Unknown model: {config.model}. Available: {', '.join(sorted(MODELS))}")
        return issues

    try:
        spec = build_model(config.model, config.params)
    except ModelError as e:
        issues.append(str(e))
        return issues

    instance = spec.instantiate(config.seed)
    accessors = instance.accessors
    events = instance.kernel.events
    for decl in config.observed:
        if decl.source is BindingSource.ATTRIBUTE and decl.target not in accessors:
            issues.append(f"Observed variable {decl.name}: unknown attribute {decl.target}")
        elif decl.source is BindingSource.PROBE:
            try:
                location = normalize_probe_spec(decl.target)
            except MonitorError as e:
                issues.append(f"Observed variable {decl.name}: {e}")
                continue
            if location not in instance.probes:
                issues.append(f"Observed variable {decl.name}: undeclared probe {location}")
        elif decl.source is BindingSource.PHASE and decl.target not in PHASE_HOOKS:
            issues.append(f"Observed variable {decl.name}: unknown phase {decl.target}")
        elif decl.source is BindingSource.EVENT and decl.target.removesuffix(NOTIFIED_SUFFIX) not in events:
            issues.append(f"Observed variable {decl.name}: unknown event {decl.target}")

    return issues
