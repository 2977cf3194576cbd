"""Tests for user-level configuration."""

from pathlib import Path

from smcheck.core.user_config import (
    UserConfig,
    get_user_config_path,
    load_user_config,
    save_user_config,
)


class TestUserConfig:
    """Tests for ~/.smcheck/config.yaml handling."""

    def test_path_follows_smcheck_home(self, isolated_environment: Path) -> None:
        assert get_user_config_path() == isolated_environment / "config.yaml"

    def test_missing_file(self) -> None:
        assert load_user_config() is None

    def test_save_and_load(self, isolated_environment: Path) -> None:
        save_user_config(UserConfig(default_delta=0.05, default_jobs=4))

        assert (isolated_environment / "config.yaml").exists()
        loaded = load_user_config()
        assert loaded == UserConfig(default_delta=0.05, default_jobs=4)

    def test_defaults_use_config_field_names(self) -> None:
        config = UserConfig(default_alpha=0.01, default_seed=3)
        assert config.defaults() == {"alpha": 0.01, "seed": 3}

    def test_invalid_file_is_ignored(self, isolated_environment: Path) -> None:
        isolated_environment.mkdir(parents=True)
        (isolated_environment / "config.yaml").write_text("default_delta: 7\n")

        assert load_user_config() is None

    def test_empty_file(self, isolated_environment: Path) -> None:
        isolated_environment.mkdir(parents=True)
        (isolated_environment / "config.yaml").write_text("")

        assert load_user_config() == UserConfig()

    def test_non_mapping_file_is_ignored(self, isolated_environment: Path) -> None:
        isolated_environment.mkdir(parents=True)
        (isolated_environment / "config.yaml").write_text("- 0.05\n- 0.02\n")

        assert load_user_config() is None

    def test_save_omits_unset_fields(self, isolated_environment: Path) -> None:
        path = save_user_config(UserConfig(default_seed=9))

        assert path == isolated_environment / "config.yaml"
        assert path.read_text() == "default_seed: 9\n"
