"""Tests for the trace data model."""

import pytest

from smcheck.models.trace import TimedState, Trace, TraceError, VarDecl, VarKind, VarRegistry


@pytest.fixture
def registry() -> VarRegistry:
    return VarRegistry(
        [
            VarDecl("c_read", VarKind.INT, "character read"),
            VarDecl("level", VarKind.REAL),
            VarDecl("busy", VarKind.BOOL),
        ]
    )


@pytest.fixture
def trace(registry: VarRegistry) -> Trace:
    return Trace(registry, [((0, 0.0, False), 0), ((38, 0.5, True), 3), ((64, 1.0, False), 5)])


class TestVarRegistry:
    """Tests for VarRegistry."""

    def test_order_and_lookup(self, registry: VarRegistry) -> None:
        assert registry.names == ["c_read", "level", "busy"]
        assert registry.index("busy") == 2
        assert registry.kind("level") is VarKind.REAL
        assert "c_read" in registry
        assert len(registry) == 3

    def test_duplicate_names_rejected(self) -> None:
        with pytest.raises(TraceError, match="duplicate"):
            VarRegistry([VarDecl("a", VarKind.INT), VarDecl("a", VarKind.BOOL)])

    def test_unknown_name(self, registry: VarRegistry) -> None:
        with pytest.raises(TraceError, match="unknown"):
            registry.index("nope")

    def test_equality_ignores_descriptions(self) -> None:
        a = VarRegistry([VarDecl("x", VarKind.INT, "one")])
        b = VarRegistry([VarDecl("x", VarKind.INT, "two")])
        assert a == b


class TestVarKind:
    """Tests for kind checks and coercion."""

    def test_bool_is_not_int(self) -> None:
        assert not VarKind.INT.accepts(True)
        assert VarKind.BOOL.accepts(True)

    def test_real_accepts_int(self) -> None:
        assert VarKind.REAL.accepts(3)

    @pytest.mark.parametrize(
        ("kind", "raw", "expected"),
        [
            (VarKind.BOOL, 1, True),
            (VarKind.BOOL, False, False),
            (VarKind.INT, 4.0, 4),
            (VarKind.REAL, 2, 2.0),
        ],
    )
    def test_coerce(self, kind: VarKind, raw: object, expected: object) -> None:
        assert kind.coerce(raw) == expected

    @pytest.mark.parametrize(("kind", "raw"), [(VarKind.BOOL, 2), (VarKind.INT, 1.5), (VarKind.REAL, "x")])
    def test_coerce_rejects(self, kind: VarKind, raw: object) -> None:
        with pytest.raises(TraceError):
            kind.coerce(raw)


class TestTrace:
    """Tests for Trace."""

    def test_append_and_access(self, trace: Trace) -> None:
        assert len(trace) == 3
        assert trace.times == [0, 3, 5]
        assert trace.column("c_read") == [0, 38, 64]
        assert trace.state(1).value("busy") is True
        assert trace.state(1).as_dict() == {"c_read": 38, "level": 0.5, "busy": True}

    def test_equal_timestamps_allowed(self, trace: Trace) -> None:
        trace.append_values((1, 1.0, False), 5)
        assert trace.times[-2:] == [5, 5]

    def test_time_regression_rejected(self, trace: Trace) -> None:
        with pytest.raises(TraceError, match="regression"):
            trace.append_values((1, 1.0, False), 4)

    def test_arity_mismatch_rejected(self, trace: Trace) -> None:
        with pytest.raises(TraceError, match="arity"):
            trace.append_values((1, 1.0), 6)

    def test_kind_mismatch_rejected(self, trace: Trace) -> None:
        with pytest.raises(TraceError, match="kind"):
            trace.append_values((1, 1.0, 1), 6)

    def test_complete_trace_is_frozen(self, trace: Trace) -> None:
        trace.close()
        with pytest.raises(TraceError, match="complete"):
            trace.append_values((1, 1.0, False), 6)

    def test_append_state_with_other_registry(self, trace: Trace) -> None:
        other = VarRegistry([VarDecl("x", VarKind.INT)])
        with pytest.raises(TraceError, match="registry"):
            trace.append(TimedState((1,), 6, other))

    def test_value_at_or_before(self, trace: Trace) -> None:
        assert trace.value_at_or_before("c_read", 4) == 38
        assert trace.value_at_or_before("c_read", 5) == 64
        assert trace.value_at_or_before("c_read", 100) == 64

    def test_value_before_first_sample(self, registry: VarRegistry) -> None:
        late = Trace(registry, [((1, 0.0, False), 10)])
        assert late.value_at_or_before("c_read", 9) is None

    def test_project(self, trace: Trace) -> None:
        projected = trace.project(["busy", "c_read"])

        assert projected.registry.names == ["c_read", "busy"]
        assert projected.times == trace.times
        assert projected.rows[1] == (38, True)

    def test_project_unknown_name(self, trace: Trace) -> None:
        with pytest.raises(TraceError):
            trace.project(["nope"])

    def test_equality(self, registry: VarRegistry, trace: Trace) -> None:
        copy = Trace(registry, [(row, t) for row, t in zip(trace.rows, trace.times)])
        assert copy == trace
        copy.close()
        assert copy != trace
