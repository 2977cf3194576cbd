"""JSON-lines and CSV codecs for execution traces.

Line 1 is a header object::

    {"registry": [{"name": "c_read", "kind": "int", "description": ""}, ...],
     "complete": true, "resolution": ["MON_TIMED_NOTIFY_PHASE_END"], "seed": 42,
     "metadata": {...}}

Every further line is one state ``{"t": <int>, "v": [<values>]}`` in registry order.
"""

import csv
import io
import json
from collections.abc import Iterable
from pathlib import Path
from typing import TextIO

from pydantic import ValidationError

from smcheck.models.trace import StateRecord, Trace, TraceError, TraceHeader
from smcheck.utils.logging import get_logger

logger = get_logger()


class TraceFormatError(TraceError):
    """Malformed serialized trace."""

    def __init__(self, message: str, line_number: int) -> None:
        self.line_number = line_number
        super().__init__(f"line {line_number}: {message}")


def _reason(error: ValidationError) -> str:
    first = error.errors()[0]
    where = ".".join(str(part) for part in first["loc"])
    return f"{where}: {first['msg']}" if where else first["msg"]


def write_jsonl(trace: Trace, stream: TextIO) -> None:
    """Write a trace as JSON lines."""
    header = TraceHeader.from_trace(trace).model_dump(exclude_none=True)
    stream.write(json.dumps(header, default=str) + "\n")
    for values, time in zip(trace.rows, trace.times):
        stream.write(json.dumps({"t": time, "v": list(values)}) + "\n")


def to_jsonl(trace: Trace) -> str:
    buffer = io.StringIO()
    write_jsonl(trace, buffer)
    return buffer.getvalue()


def from_jsonl(lines: Iterable[str] | str) -> Trace:
    """
    Parse a trace from JSON lines.

    The header and every state line are validated through their record models.

    Args:
        lines: Text or an iterable of lines (e.g. an open file)

    Returns:
        The trace, complete if the header says so

    Raises:
        TraceFormatError: On a malformed line, naming its number
    """
    if isinstance(lines, str):
        lines = lines.splitlines()
    trace: Trace | None = None
    complete = False
    for line_number, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        if trace is None:
            trace, complete = _read_header(line, line_number)
            continue
        _append_state(trace, line, line_number)
    if trace is None:
        raise TraceFormatError("missing header line", 1)
    trace.complete = complete
    return trace


def _read_header(line: str, line_number: int) -> tuple[Trace, bool]:
    try:
        header = TraceHeader.model_validate_json(line)
        return header.to_trace(), header.complete
    except ValidationError as e:
        raise TraceFormatError(f"invalid header: {_reason(e)}", line_number) from e
    except TraceError as e:
        raise TraceFormatError(f"invalid header: {e}", line_number) from e


def _append_state(trace: Trace, line: str, line_number: int) -> None:
    try:
        record = StateRecord.model_validate_json(line)
    except ValidationError as e:
        raise TraceFormatError(f"invalid state: {_reason(e)}", line_number) from e
    if len(record.v) != len(trace.registry):
        raise TraceFormatError(f"expected {len(trace.registry)} values, got {record.v!r}", line_number)
    try:
        values = [decl.kind.coerce(v) for decl, v in zip(trace.registry.decls, record.v)]
        trace.append_values(values, record.t)
    except TraceError as e:
        raise TraceFormatError(str(e), line_number) from e


def save_trace(trace: Trace, path: Path) -> None:
    """Write a trace to a ``.jsonl`` file, creating parent directories."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        write_jsonl(trace, f)
    logger.debug("trace_saved", path=str(path), states=len(trace))


def load_trace(path: Path) -> Trace:
    """
    Read a trace from a ``.jsonl`` file.

    Raises:
        TraceFormatError: If the file is malformed
    """
    with open(path, encoding="utf-8") as f:
        return from_jsonl(f)


def to_csv(trace: Trace) -> str:
    """Render a trace as CSV: a ``t`` column, then one column per variable."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["t", *trace.registry.names])
    for values, time in zip(trace.rows, trace.times):
        writer.writerow([time, *(int(v) if isinstance(v, bool) else v for v in values)])
    return buffer.getvalue()
