"""Parser and serializer for MAG-style check configuration files.

One directive per line, ``#`` starts a comment::

    model            fifo
    param            p1 0.9
    attribute        pnt_con->c_int   c_read
    att_type         int   c_read
    location         send_start   "%Producer::send()":call
    time_resolution  MON_TIMED_NOTIFY_PHASE_END | write_event.notified
    formula          Pr(G<=5000((c_read = '&') => (F<=25(c_read = '@'))))

Directives of the original C++ monitor generator that have no meaning here are accepted
and ignored with a warning.
"""

from pathlib import Path
from typing import Any

from pydantic import ValidationError

from smcheck.core.monitor import BindingSource, MonitorError, TemporalResolution
from smcheck.models.config import CheckConfig, ObservedDecl
from smcheck.models.trace import VarKind
from smcheck.utils.logging import get_logger

logger = get_logger()

IGNORED_DIRECTIVES = frozenset(
    {
        "output_file",
        "mon_name",
        "plasma_file",
        "plasma_project_name",
        "plasma_model_name",
        "plasma_model_content",
        "include",
        "usertype",
        "type",
        "write_to_file",
    }
)

ATT_TYPES = {"int": VarKind.INT, "real": VarKind.REAL, "double": VarKind.REAL, "bool": VarKind.BOOL}

# directive -> config field for single-valued scalars
SCALAR_DIRECTIVES = {
    "model": "model",
    "delta": "delta",
    "alpha": "alpha",
    "beta": "beta",
    "seed": "seed",
    "jobs": "jobs",
    "runs": "runs",
    "max_time": "max_time",
    "results_json": "results_json",
    "results_csv": "results_csv",
    "dump_traces": "dump_traces",
}


class ParserError(Exception):
    """Malformed configuration file."""

    def __init__(self, message: str, line_number: int | None = None) -> None:
        self.line_number = line_number
        prefix = f"line {line_number}: " if line_number is not None else ""
        super().__init__(prefix + message)


def _split(rest: str, parts: int, directive: str, line_number: int) -> list[str]:
    fields = rest.split(None, parts - 1)
    if len(fields) != parts:
        raise ParserError(f"{directive} expects {parts} argument(s)", line_number)
    return fields


class MagConfigParser:
    """Reads check configurations from directive files."""

    def parse_file(self, path: Path) -> CheckConfig:
        """
        Parse a configuration file.

        Args:
            path: Configuration file

        Returns:
            Parsed configuration

        Raises:
            ParserError: If the file is missing or malformed
        """
        if not path.exists():
            raise ParserError(f"configuration file does not exist: {path}")
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise ParserError(f"cannot read configuration file {path}: {e}") from e
        config = self.parse(text)
        config.source = path
        logger.info("config_parsed", file=str(path), model=config.model, queries=len(config.queries))
        return config

    def parse(self, text: str) -> CheckConfig:
        """
        Parse configuration text.

        Raises:
            ParserError: On an unknown directive, a bad argument count or an invalid value
        """
        data: dict[str, Any] = {
            "params": {},
            "observed": [],
            "att_types": {},
            "resolution": [],
            "queries": [],
        }
        for line_number, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            directive, *rest = line.split(None, 1)
            self._apply(data, directive, rest[0].strip() if rest else "", line_number)

        try:
            return CheckConfig.model_validate(data)
        except ValidationError as e:
            raise ParserError(f"invalid configuration: {e}") from e

    def _apply(self, data: dict[str, Any], directive: str, rest: str, line_number: int) -> None:
        if directive in IGNORED_DIRECTIVES:
            logger.warning("config_directive_ignored", directive=directive, line=line_number)
            return
        if directive in SCALAR_DIRECTIVES:
            if not rest:
                raise ParserError(f"{directive} expects a value", line_number)
            data[SCALAR_DIRECTIVES[directive]] = rest
        elif directive == "param":
            name, value = _split(rest, 2, directive, line_number)
            data["params"][name] = value.strip()
        elif directive == "attribute":
            target, name = _split(rest, 2, directive, line_number)
            data["observed"].append(ObservedDecl(name=name.strip(), source=BindingSource.ATTRIBUTE, target=target))
        elif directive == "location":
            name, target = _split(rest, 2, directive, line_number)
            data["observed"].append(ObservedDecl(name=name, source=BindingSource.PROBE, target=target.strip()))
        elif directive in ("phase", "event"):
            target, name = _split(rest, 2, directive, line_number)
            data["observed"].append(ObservedDecl(name=name.strip(), source=BindingSource(directive), target=target))
        elif directive == "att_type":
            kind, name = _split(rest, 2, directive, line_number)
            if kind not in ATT_TYPES:
                raise ParserError(f"unknown att_type {kind!r}; expected int, real or bool", line_number)
            data["att_types"][name.strip()] = ATT_TYPES[kind]
        elif directive == "time_resolution":
            try:
                resolution = TemporalResolution.parse(rest)
            except MonitorError:
                raise ParserError("time_resolution expects at least one term", line_number) from None
            data["resolution"].extend(resolution.terms)
        elif directive == "formula":
            if not rest:
                raise ParserError("formula expects a query", line_number)
            data["queries"].append(rest)
        else:
            raise ParserError(f"unknown directive {directive!r}", line_number)


def serialize_config(config: CheckConfig) -> str:
    """
    Render a configuration in directive form.

    Parsing the output yields an equal configuration.
    """
    lines = [f"model {config.model}"]
    lines += [f"param {name} {value}" for name, value in config.params.items()]
    for decl in config.observed:
        if decl.source is BindingSource.PROBE:
            lines.append(f"location {decl.name} {decl.target}")
        else:
            lines.append(f"{decl.source.value} {decl.target} {decl.name}")
    lines += [f"att_type {kind.value} {name}" for name, kind in config.att_types.items()]
    if config.resolution:
        lines.append("time_resolution " + " | ".join(config.resolution))
    lines += [f"formula {query}" for query in config.queries]
    lines += [
        f"delta {config.delta!r}",
        f"alpha {config.alpha!r}",
        f"beta {config.beta!r}",
        f"seed {config.seed}",
        f"jobs {config.jobs}",
        f"max_time {config.max_time}",
    ]
    if config.runs is not None:
        lines.append(f"runs {config.runs}")
    for field in ("results_json", "results_csv", "dump_traces"):
        value = getattr(config, field)
        if value is not None:
            lines.append(f"{field} {value}")
    return "\n".join(lines) + "\n"
