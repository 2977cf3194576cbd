"""Tests for the JSONL and CSV trace codecs."""

import json
from pathlib import Path

import pytest

from smcheck.adapters.traces.jsonl import (
    TraceFormatError,
    from_jsonl,
    load_trace,
    save_trace,
    to_csv,
    to_jsonl,
)
from smcheck.models.trace import Trace, TraceHeader, VarDecl, VarKind, VarRegistry


@pytest.fixture
def trace() -> Trace:
    registry = VarRegistry(
        [
            VarDecl("c_read", VarKind.INT, "character read"),
            VarDecl("level", VarKind.REAL),
            VarDecl("busy", VarKind.BOOL),
        ]
    )
    trace = Trace(
        registry,
        [((0, 0.0, False), 0), ((38, 0.5, True), 3)],
        metadata={"seed": 42, "resolution": ["MON_DELTA_CYCLE_END"], "model": "fifo"},
    )
    return trace.close()


class TestJsonl:
    """Tests for the JSON-lines codec."""

    def test_header_line(self, trace: Trace) -> None:
        header = json.loads(to_jsonl(trace).splitlines()[0])

        assert header["complete"] is True
        assert header["seed"] == 42
        assert header["resolution"] == ["MON_DELTA_CYCLE_END"]
        assert header["metadata"] == {"model": "fifo"}
        assert [entry["name"] for entry in header["registry"]] == ["c_read", "level", "busy"]

    def test_state_lines(self, trace: Trace) -> None:
        lines = to_jsonl(trace).splitlines()
        assert json.loads(lines[2]) == {"t": 3, "v": [38, 0.5, True]}

    def test_decode_restores_trace(self, trace: Trace) -> None:
        decoded = from_jsonl(to_jsonl(trace))

        assert decoded == trace
        assert decoded.metadata["seed"] == 42
        assert decoded.registry.decls[0].description == "character read"

    def test_incomplete_trace_stays_open(self, trace: Trace) -> None:
        text = to_jsonl(trace).replace('"complete": true', '"complete": false')
        assert from_jsonl(text).complete is False

    def test_blank_lines_skipped(self, trace: Trace) -> None:
        assert from_jsonl(to_jsonl(trace) + "\n\n") == trace

    def test_save_and_load(self, trace: Trace, tmp_path: Path) -> None:
        path = tmp_path / "nested" / "run.jsonl"
        save_trace(trace, path)
        assert load_trace(path) == trace

    def test_invalid_json_reports_line(self, trace: Trace) -> None:
        text = to_jsonl(trace) + "{not json\n"
        with pytest.raises(TraceFormatError) as exc_info:
            from_jsonl(text)
        assert exc_info.value.line_number == 4

    def test_wrong_arity_reports_line(self, trace: Trace) -> None:
        lines = to_jsonl(trace).splitlines()
        lines[1] = json.dumps({"t": 0, "v": [0, 0.0]})
        with pytest.raises(TraceFormatError) as exc_info:
            from_jsonl(lines)
        assert exc_info.value.line_number == 2

    def test_time_regression_reports_line(self, trace: Trace) -> None:
        text = to_jsonl(trace) + json.dumps({"t": 1, "v": [0, 0.0, False]}) + "\n"
        with pytest.raises(TraceFormatError, match="line 4"):
            from_jsonl(text)

    def test_missing_header(self) -> None:
        with pytest.raises(TraceFormatError, match="missing header"):
            from_jsonl("")

    def test_bad_registry_kind(self) -> None:
        header = json.dumps({"registry": [{"name": "x", "kind": "string"}]})
        with pytest.raises(TraceFormatError, match="invalid header: registry.0.kind"):
            from_jsonl(header)

    def test_duplicate_registry_name(self) -> None:
        header = json.dumps({"registry": [{"name": "x", "kind": "int"}, {"name": "x", "kind": "bool"}]})
        with pytest.raises(TraceFormatError, match="duplicate observed variable"):
            from_jsonl(header)

    def test_unknown_header_keys_ignored(self, trace: Trace) -> None:
        lines = to_jsonl(trace).splitlines()
        header = json.loads(lines[0])
        header["generator"] = "other tool"
        lines[0] = json.dumps(header)

        assert from_jsonl(lines) == trace

    @pytest.mark.parametrize(
        "state",
        [
            {"t": True, "v": [0, 0.0, False]},
            {"t": 1.5, "v": [0, 0.0, False]},
            {"t": 4, "v": [0, "0.0", False]},
            {"v": [0, 0.0, False]},
        ],
    )
    def test_malformed_state_reports_line(self, trace: Trace, state: dict[str, object]) -> None:
        text = to_jsonl(trace) + json.dumps(state) + "\n"
        with pytest.raises(TraceFormatError, match="line 4: invalid state") as exc_info:
            from_jsonl(text)
        assert exc_info.value.line_number == 4


class TestTraceHeader:
    """Tests for the header record."""

    def test_lifts_seed_and_resolution(self, trace: Trace) -> None:
        header = TraceHeader.from_trace(trace)

        assert header.seed == 42
        assert header.resolution == ["MON_DELTA_CYCLE_END"]
        assert header.metadata == {"model": "fifo"}
        assert [record.kind for record in header.registry] == [VarKind.INT, VarKind.REAL, VarKind.BOOL]

    def test_to_trace_is_open_and_empty(self, trace: Trace) -> None:
        rebuilt = TraceHeader.from_trace(trace).to_trace()

        assert rebuilt.registry == trace.registry
        assert rebuilt.metadata == trace.metadata
        assert len(rebuilt) == 0
        assert not rebuilt.complete


class TestCsv:
    """Tests for the CSV export."""

    def test_columns_and_bools(self, trace: Trace) -> None:
        assert to_csv(trace) == "t,c_read,level,busy\n0,0,0.0,0\n3,38,0.5,1\n"
