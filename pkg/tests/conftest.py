"""Shared fixtures."""

from pathlib import Path

import pytest

from smcheck.core.config import ENV_OVERRIDES


@pytest.fixture(autouse=True)
def isolated_environment(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> Path:
    """Point the user config at an empty directory and clear SMCHECK_* overrides."""
    home = tmp_path / "smcheck-home"
    monkeypatch.setenv("SMCHECK_HOME", str(home))
    for variable in ENV_OVERRIDES:
        monkeypatch.delenv(variable, raising=False)
    return home
