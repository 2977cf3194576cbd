"""Observed-variable registry, timed states and execution traces."""

from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional, Union

from pydantic import BaseModel, Field, StrictBool, StrictFloat, StrictInt

Value = Union[int, float, bool]


class TraceError(Exception):
    """Invalid trace construction or access."""

    pass


class VarKind(str, Enum):
    """Declared type of an observed variable."""

    INT = "int"
    REAL = "real"
    BOOL = "bool"

    def __str__(self) -> str:
        """String representation."""
        return self.value

    def accepts(self, value: object) -> bool:
        """Check whether a concrete value matches this kind."""
        if self is VarKind.BOOL:
            return isinstance(value, bool)
        if self is VarKind.INT:
            return isinstance(value, int) and not isinstance(value, bool)
        return isinstance(value, (int, float)) and not isinstance(value, bool)

    def coerce(self, value: object) -> Value:
        """
        Convert a raw value (e.g. decoded JSON) to this kind.

        Raises:
            TraceError: If the value cannot represent this kind
        """
        if self is VarKind.BOOL:
            if isinstance(value, bool):
                return value
            if value in (0, 1):
                return bool(value)
        elif self is VarKind.INT:
            if isinstance(value, bool):
                return int(value)
            if isinstance(value, int):
                return value
            if isinstance(value, float) and value.is_integer():
                return int(value)
        elif isinstance(value, (int, float)) and not isinstance(value, bool):
            return float(value)
        raise TraceError(f"value {value!r} is not of kind {self.value}")


@dataclass(frozen=True)
class VarDecl:
    """One registry entry."""

    name: str
    kind: VarKind
    description: str = ""


class VarRegistry:
    """Ordered, name-unique list of observed variables.

    The order defines the column order of states and serialized traces.
    """

    __slots__ = ("_decls", "_index")

    def __init__(self, decls: Iterable[VarDecl]) -> None:
        self._decls: tuple[VarDecl, ...] = tuple(decls)
        self._index: dict[str, int] = {}
        for position, decl in enumerate(self._decls):
            if decl.name in self._index:
                raise TraceError(f"duplicate observed variable: {decl.name}")
            self._index[decl.name] = position

    @property
    def decls(self) -> tuple[VarDecl, ...]:
        return self._decls

    @property
    def names(self) -> list[str]:
        return [d.name for d in self._decls]

    def index(self, name: str) -> int:
        """
        Get the column of a variable.

        Raises:
            TraceError: If the name is not registered
        """
        try:
            return self._index[name]
        except KeyError:
            raise TraceError(f"unknown observed variable: {name}") from None

    def kind(self, name: str) -> VarKind:
        return self._decls[self.index(name)].kind

    def __contains__(self, name: object) -> bool:
        return name in self._index

    def __len__(self) -> int:
        return len(self._decls)

    def __iter__(self) -> Iterator[VarDecl]:
        return iter(self._decls)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VarRegistry):
            return NotImplemented
        return [(d.name, d.kind) for d in self._decls] == [(d.name, d.kind) for d in other._decls]

    def __hash__(self) -> int:
        return hash(tuple((d.name, d.kind) for d in self._decls))

    def __repr__(self) -> str:
        return f"VarRegistry({', '.join(f'{d.name}:{d.kind}' for d in self._decls)})"


@dataclass(frozen=True)
class TimedState:
    """Valuation of every registered variable at an integer tick."""

    values: tuple[Value, ...]
    time: int
    registry: VarRegistry = field(compare=False, repr=False)

    def value(self, name: str) -> Value:
        """Look up a variable by name."""
        return self.values[self.registry.index(name)]

    def as_dict(self) -> dict[str, Value]:
        return dict(zip(self.registry.names, self.values))


class Trace:
    """Finite execution trace built by a single producer.

    ``complete`` means the generating simulation ended and no state may be appended.
    """

    __slots__ = ("registry", "_values", "_times", "complete", "metadata")

    def __init__(
        self,
        registry: VarRegistry,
        states: Iterable[tuple[Sequence[Value], int]] = (),
        complete: bool = False,
        metadata: dict[str, object] | None = None,
    ) -> None:
        """
        Initialize a trace.

        Args:
            registry: Observed-variable registry
            states: Optional initial (values, time) pairs
            complete: Whether the trace is already closed
            metadata: Free-form header data (seed, resolution, model)
        """
        self.registry = registry
        self._values: list[tuple[Value, ...]] = []
        self._times: list[int] = []
        self.complete = False
        self.metadata: dict[str, object] = dict(metadata or {})
        for values, time in states:
            self.append_values(values, time)
        self.complete = complete

    def append(self, state: TimedState) -> "Trace":
        """
        Append a state.

        Args:
            state: State whose registry matches this trace

        Returns:
            This trace (for chaining)

        Raises:
            TraceError: On a complete trace, time regression or shape mismatch
        """
        if state.registry is not self.registry and state.registry != self.registry:
            raise TraceError("state registry does not match trace registry")
        return self.append_values(state.values, state.time)

    def append_values(self, values: Sequence[Value], time: int) -> "Trace":
        """Append a raw valuation (the monitor's fast path)."""
        if self.complete:
            raise TraceError("cannot append to a complete trace")
        if time < 0:
            raise TraceError(f"negative timestamp: {time}")
        if self._times and time < self._times[-1]:
            raise TraceError(f"time regression: {time} after {self._times[-1]}")
        if len(values) != len(self.registry):
            raise TraceError(
                f"state arity {len(values)} does not match registry size {len(self.registry)}"
            )
        for decl, value in zip(self.registry.decls, values):
            if not decl.kind.accepts(value):
                raise TraceError(
                    f"value {value!r} of {decl.name} does not match kind {decl.kind.value}"
                )
        self._values.append(tuple(values))
        self._times.append(time)
        return self

    def close(self) -> "Trace":
        """Mark the trace complete."""
        self.complete = True
        return self

    @property
    def times(self) -> list[int]:
        return self._times

    @property
    def rows(self) -> list[tuple[Value, ...]]:
        return self._values

    def state(self, i: int) -> TimedState:
        return TimedState(self._values[i], self._times[i], self.registry)

    def column(self, name: str) -> list[Value]:
        position = self.registry.index(name)
        return [row[position] for row in self._values]

    def value_at_or_before(self, name: str, time: int) -> Value | None:
        """
        Get the value of a variable at the last state with timestamp <= time.

        Returns:
            The value, or None if no state is that early
        """
        position = self.registry.index(name)
        for i in range(len(self._times) - 1, -1, -1):
            if self._times[i] <= time:
                return self._values[i][position]
        return None

    def project(self, names: Iterable[str]) -> "Trace":
        """
        Restrict the trace to a subset of variables (kept in registry order).

        The result has the same length and timestamps.

        Raises:
            TraceError: If a name is not registered
        """
        wanted = set(names)
        for name in wanted:
            self.registry.index(name)
        kept = [i for i, d in enumerate(self.registry.decls) if d.name in wanted]
        registry = VarRegistry(self.registry.decls[i] for i in kept)
        projected = Trace(registry, metadata=self.metadata)
        projected._values = [tuple(row[i] for i in kept) for row in self._values]
        projected._times = list(self._times)
        projected.complete = self.complete
        return projected

    def __len__(self) -> int:
        return len(self._times)

    def __iter__(self) -> Iterator[TimedState]:
        for i in range(len(self._times)):
            yield self.state(i)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Trace):
            return NotImplemented
        return (
            self.registry == other.registry
            and self._times == other._times
            and self._values == other._values
            and self.complete == other.complete
        )

    def __repr__(self) -> str:
        return f"Trace(len={len(self)}, vars={self.registry.names}, complete={self.complete})"


# Serialized records (one header line, then one line per state)

# header keys lifted out of the free-form metadata
HEADER_KEYS = ("resolution", "seed")


class VarDeclRecord(BaseModel):
    """Registry entry as written in a trace header."""

    name: str = Field(..., description="Observed variable name", min_length=1)
    kind: VarKind = Field(..., description="Declared type")
    description: str = Field(default="", description="What the variable observes")

    def to_decl(self) -> VarDecl:
        return VarDecl(self.name, self.kind, self.description)


class TraceHeader(BaseModel):
    """First line of a serialized trace."""

    registry: list[VarDeclRecord] = Field(..., description="Observed variables in column order")
    complete: bool = Field(default=False, description="Whether the simulation had ended")
    resolution: Optional[list[str]] = Field(default=None, description="Temporal resolution terms")
    seed: Optional[int] = Field(default=None, description="Per-run seed", ge=0)
    metadata: dict[str, Any] = Field(default_factory=dict, description="Other run metadata")

    model_config = {"extra": "ignore"}

    @classmethod
    def from_trace(cls, trace: "Trace") -> "TraceHeader":
        metadata = dict(trace.metadata)
        lifted = {key: metadata.pop(key) for key in HEADER_KEYS if key in metadata}
        return cls(
            registry=[VarDeclRecord(name=d.name, kind=d.kind, description=d.description) for d in trace.registry],
            complete=trace.complete,
            metadata=metadata,
            **lifted,
        )

    def to_trace(self) -> "Trace":
        """
        An open trace with this header's registry and metadata.

        Raises:
            TraceError: If the registry repeats a name
        """
        metadata: dict[str, object] = dict(self.metadata)
        if self.resolution is not None:
            metadata["resolution"] = self.resolution
        if self.seed is not None:
            metadata["seed"] = self.seed
        return Trace(VarRegistry(entry.to_decl() for entry in self.registry), metadata=metadata)


class StateRecord(BaseModel):
    """One serialized state: integer tick and values in registry order."""

    t: StrictInt = Field(..., description="Timestamp in ticks", ge=0)
    v: list[StrictBool | StrictInt | StrictFloat] = Field(..., description="Values in registry order")
