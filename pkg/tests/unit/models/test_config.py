"""Unit tests for configuration models."""

from pathlib import Path

import pytest
from pydantic import ValidationError

from smcheck.core.monitor import BindingSource
from smcheck.models.config import DEFAULT_SEED, CheckConfig, ObservedDecl
from smcheck.models.statistics import StatParams
from smcheck.models.trace import VarKind


class TestCheckConfig:
    """Tests for CheckConfig model."""

    def test_defaults(self) -> None:
        """Test the built-in defaults."""
        config = CheckConfig()

        assert config.model == "fifo"
        assert (config.delta, config.alpha, config.beta) == (0.02, 0.02, 0.02)
        assert config.seed == DEFAULT_SEED == 20150101
        assert config.jobs == 1
        assert config.runs is None

    @pytest.mark.parametrize(
        "field, value",
        [("delta", 0.0), ("alpha", 1.0), ("beta", -0.1), ("seed", -1), ("seed", 1 << 64), ("jobs", 0), ("runs", 0)],
    )
    def test_rejects_out_of_range(self, field: str, value: float) -> None:
        with pytest.raises(ValidationError):
            CheckConfig(**{field: value})

    def test_resolution_terms_stripped(self) -> None:
        config = CheckConfig(resolution=[" MON_DELTA_CYCLE_END ", "", "  "])
        assert config.resolution == ["MON_DELTA_CYCLE_END"]

    def test_stat_params(self) -> None:
        config = CheckConfig(delta=0.05, alpha=0.01, beta=0.03)
        assert config.stat_params == StatParams(delta=0.05, alpha=0.01, beta=0.03)

    def test_bindings_typed_by_att_type(self) -> None:
        config = CheckConfig(
            observed=[
                ObservedDecl(name="c_read", source=BindingSource.ATTRIBUTE, target="pnt_con->c_int"),
                ObservedDecl(name="sent", source=BindingSource.PROBE, target="send:call"),
            ],
            att_types={"c_read": VarKind.REAL},
        )
        first, second = config.bindings()

        assert first.kind is VarKind.REAL
        assert first.target == "pnt_con->c_int"
        assert second.source is BindingSource.PROBE
        assert second.kind is None

    def test_with_overrides_skips_none(self) -> None:
        """Test that None overrides leave values alone and the source is kept."""
        config = CheckConfig(seed=5, source=Path("fifo.mag"))
        updated = config.with_overrides(seed=None, jobs=4)

        assert updated.seed == 5
        assert updated.jobs == 4
        assert updated.source == Path("fifo.mag")

    def test_with_overrides_validates(self) -> None:
        with pytest.raises(ValidationError):
            CheckConfig().with_overrides(delta=3.0)

    def test_source_not_dumped(self) -> None:
        assert "source" not in CheckConfig(source=Path("x.mag")).model_dump()
