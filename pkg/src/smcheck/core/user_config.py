"""User-level configuration management (~/.smcheck/config.yaml)."""

import os
from pathlib import Path
from typing import Optional

import yaml
from pydantic import BaseModel, Field, ValidationError

from smcheck.utils.logging import get_logger

logger = get_logger()


class UserConfig(BaseModel):
    """User-level smcheck defaults.

    Stored in ~/.smcheck/config.yaml. Each value only fills in what a check configuration
    file leaves unset.
    """

    default_delta: Optional[float] = Field(default=None, description="Default absolute error", gt=0, lt=1)
    default_alpha: Optional[float] = Field(default=None, description="Default Type-I error bound", gt=0, lt=1)
    default_beta: Optional[float] = Field(default=None, description="Default Type-II error bound", gt=0, lt=1)
    default_seed: Optional[int] = Field(default=None, description="Default master seed", ge=0, lt=1 << 64)
    default_jobs: Optional[int] = Field(default=None, description="Default worker processes", ge=1)

    def defaults(self) -> dict[str, float | int]:
        """Set values keyed by check-configuration field name."""
        return {
            name.removeprefix("default_"): value
            for name, value in self.model_dump(exclude_none=True).items()
        }


def get_user_config_path() -> Path:
    """Get the path to the user-level config file.

    ``SMCHECK_HOME`` replaces ``~/.smcheck`` when set.

    Returns:
        Path to ~/.smcheck/config.yaml
    """
    if home := os.getenv("SMCHECK_HOME"):
        return Path(home) / "config.yaml"
    return Path.home() / ".smcheck" / "config.yaml"


def load_user_config() -> Optional[UserConfig]:
    """Load the user defaults.

    A missing, unreadable or invalid file is logged and treated as absent.

    Returns:
        UserConfig instance, or None
    """
    config_path = get_user_config_path()
    if not config_path.exists():
        logger.debug("user_config_not_found", path=str(config_path))
        return None

    try:
        data = yaml.safe_load(config_path.read_text()) or {}
        if not isinstance(data, dict):
            raise ValueError(f"expected a mapping, got {type(data).__name__}")
        config = UserConfig.model_validate(data)
    except ValidationError as e:
        fields = sorted({".".join(str(p) for p in err["loc"]) for err in e.errors()})
        logger.warning("user_config_invalid", path=str(config_path), fields=fields)
        return None
    except (OSError, ValueError, yaml.YAMLError) as e:
        logger.warning("user_config_load_failed", path=str(config_path), error=str(e))
        return None

    logger.info("user_config_loaded", path=str(config_path), defaults=config.defaults())
    return config


def save_user_config(config: UserConfig) -> Path:
    """Write the user defaults, omitting unset fields.

    Returns:
        Path written

    Raises:
        IOError: If the file cannot be written
    """
    config_path = get_user_config_path()
    try:
        config_path.parent.mkdir(parents=True, exist_ok=True)
        config_path.write_text(yaml.safe_dump(config.model_dump(exclude_none=True), sort_keys=False))
    except OSError as e:
        logger.error("user_config_save_failed", path=str(config_path), error=str(e))
        raise IOError(f"Failed to save user config: {e}") from e
    logger.info("user_config_saved", path=str(config_path))
    return config_path
