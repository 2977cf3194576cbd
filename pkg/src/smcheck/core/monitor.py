"""Sampling of observed variables into traces, driven by kernel hooks.

A :class:`MonitoredRun` subscribes to the hooks named by the temporal resolution. Each
time a term fires it snapshots every observed variable into the trace (at most once per
scheduling instant) and feeds the online evaluator, stopping the kernel as soon as the
formula's verdict is decided.
"""

import re
from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass
from enum import Enum
from typing import Protocol

from smcheck.bltl.evaluator import TraceEvaluator, atom_holds, compile_expr
from smcheck.bltl.grammar import BltlError, parse_formula
from smcheck.core.kernel import NOTIFIED_SUFFIX, PHASE_HOOKS, Event, Kernel
from smcheck.models.formula import (
    And,
    Atom,
    FalseF,
    Formula,
    Implies,
    Not,
    Or,
    TrueF,
    Verdict,
)
from smcheck.models.trace import Trace, TraceError, Value, VarDecl, VarKind, VarRegistry
from smcheck.utils.logging import get_logger

logger = get_logger()

PROBE_SUFFIXES = ("call", "entry", "exit", "return")
_PROBE_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*:([A-Za-z]+|[0-9]+)$")
_PROBE_SPEC = re.compile(r"^\"?%?(?:[A-Za-z_][\w]*::)*(?P<func>[A-Za-z_]\w*)\s*\([^)]*\)\"?:(?P<loc>\w+)$")


class MonitorError(Exception):
    """Unresolvable binding or resolution term, or failed sampling."""

    pass


class BindingSource(str, Enum):
    """Where an observed variable takes its value from."""

    ATTRIBUTE = "attribute"
    PROBE = "probe"
    PHASE = "phase"
    EVENT = "event"


@dataclass(frozen=True)
class ObservedBinding:
    """Observed variable declaration: registry name plus value source.

    ``target`` is an accessor path for attributes, a normalized probe name for probes, a
    phase-hook name for phase flags, and an event name for event flags.
    """

    name: str
    source: BindingSource
    target: str
    kind: VarKind | None = None
    description: str = ""


def normalize_probe_spec(spec: str) -> str:
    """
    Normalize a probe location to ``function:location``.

    Accepts ``send:call`` as-is and the instrumentation form ``"%Producer::send()":call``.

    Raises:
        MonitorError: If the spec has neither form
    """
    text = spec.strip()
    if _PROBE_NAME.match(text):
        return text
    match = _PROBE_SPEC.match(text)
    if match:
        return f"{match.group('func')}:{match.group('loc')}"
    raise MonitorError(f"malformed probe location: {spec}")


def probe_is_flag(name: str) -> bool:
    """Whether a probe is a boolean location flag (vs. an argument capture)."""
    return not name.rsplit(":", 1)[1].isdigit()


class ProbeBoard:
    """Probe locations a model declares, with fired flags and captured values."""

    def __init__(self, names: Iterable[str] = ()) -> None:
        self._fired: dict[str, bool] = {}
        self._values: dict[str, Value] = {}
        self._listener: Callable[[str], None] | None = None
        self._warned: set[str] = set()
        self.referenced: set[str] = set()
        for name in names:
            self.declare(name)

    def declare(self, name: str) -> None:
        """Declare a probe location (``f:call``, ``f:entry``, ``f:exit``, ``f:return``, ``f:i``)."""
        normalized = normalize_probe_spec(name)
        self._fired[normalized] = False
        if not probe_is_flag(normalized):
            self._values[normalized] = 0

    @property
    def names(self) -> list[str]:
        return list(self._fired)

    def __contains__(self, name: object) -> bool:
        return name in self._fired

    def fire_probe(self, name: str, value: Value | None = None) -> None:
        """
        Record that execution reached a probe location.

        Args:
            name: Declared probe name
            value: Captured argument value for ``f:i`` probes

        Raises:
            MonitorError: If the probe was never declared
        """
        if name not in self._fired:
            raise MonitorError(f"unknown probe: {name}")
        if name not in self.referenced:
            if name not in self._warned:
                self._warned.add(name)
                logger.warning("probe_not_observed", probe=name)
            return
        self._fired[name] = True
        if value is not None:
            self._values[name] = value
        if self._listener is not None:
            self._listener(name)

    def fired(self, name: str) -> bool:
        return self._fired[name]

    def value(self, name: str) -> Value:
        return self._values[name]

    def reset(self) -> None:
        """Clear fired flags (captured values persist)."""
        for name in self._fired:
            self._fired[name] = False


class Observable(Protocol):
    """What a monitored model exposes."""

    kernel: Kernel
    probes: ProbeBoard

    @property
    def accessors(self) -> Mapping[str, tuple[VarKind, Callable[[], Value]]]: ...


class TemporalResolution:
    """Disjunction of sampling trigger terms."""

    def __init__(self, terms: Sequence[str]) -> None:
        cleaned = tuple(t.strip() for t in terms if t.strip())
        if not cleaned:
            raise MonitorError("temporal resolution needs at least one term")
        self.terms = cleaned

    @classmethod
    def parse(cls, text: str) -> "TemporalResolution":
        """Parse ``term | term | ...``."""
        return cls(_split_terms(text))

    def __str__(self) -> str:
        return " | ".join(self.terms)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, TemporalResolution) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(self.terms)


def _split_terms(text: str) -> list[str]:
    # "|" separates terms except inside parentheses, where it is a formula disjunction
    terms: list[str] = []
    depth = 0
    current: list[str] = []
    for char in text:
        if char == "(":
            depth += 1
        elif char == ")":
            depth -= 1
        if char == "|" and depth == 0:
            terms.append("".join(current))
            current = []
        else:
            current.append(char)
    terms.append("".join(current))
    return terms


def _compile_propositional(
    f: Formula, registry: VarRegistry
) -> Callable[[tuple[Value, ...]], bool]:
    if isinstance(f, TrueF):
        return lambda row: True
    if isinstance(f, FalseF):
        return lambda row: False
    if isinstance(f, Atom):
        fn = compile_expr(f.expr, registry)
        expr = f.expr
        return lambda row: atom_holds(expr, fn(row))
    if isinstance(f, Not):
        inner = _compile_propositional(f.operand, registry)
        return lambda row: not inner(row)
    lhs = _compile_propositional(f.lhs, registry)  # type: ignore[union-attr]
    rhs = _compile_propositional(f.rhs, registry)  # type: ignore[union-attr]
    if isinstance(f, And):
        return lambda row: lhs(row) and rhs(row)
    if isinstance(f, Or):
        return lambda row: lhs(row) or rhs(row)
    return lambda row: (not lhs(row)) or rhs(row)


def _is_propositional(f: Formula) -> bool:
    if isinstance(f, (TrueF, FalseF, Atom)):
        return True
    if isinstance(f, Not):
        return _is_propositional(f.operand)
    if isinstance(f, (And, Or, Implies)):
        return _is_propositional(f.lhs) and _is_propositional(f.rhs)
    return False


class MonitoredRun:
    """One model run under observation."""

    def __init__(
        self,
        model: Observable,
        bindings: Sequence[ObservedBinding],
        resolution: TemporalResolution,
        formula: Formula | None = None,
    ) -> None:
        """Attach to a model (see :func:`attach`)."""
        self.model = model
        self.kernel = model.kernel
        self.bindings = tuple(bindings)
        self.resolution = resolution
        self.verdict = Verdict.INCONCLUSIVE
        self.decided_by_monitor = False
        self._last_instant: tuple[int, int, str, int] | None = None
        self._current_hook: str | None = None
        self._events_seen: set[str] = set()
        self._readers: list[Callable[[], Value]] = []
        self._expr_terms: list[Callable[[], bool]] = []
        self._probe_terms: set[str] = set()

        self.registry = VarRegistry(self._resolve_bindings())
        self.trace = Trace(self.registry)
        self._resolve_terms()
        self.evaluator = TraceEvaluator(formula, self.trace) if formula is not None else None

    def _resolve_bindings(self) -> list[VarDecl]:
        if not self.bindings:
            raise MonitorError("no observed variables declared")
        accessors = self.model.accessors
        events = self.kernel.events
        probes = self.model.probes
        decls: list[VarDecl] = []
        for binding in self.bindings:
            kind: VarKind
            if binding.source is BindingSource.ATTRIBUTE:
                if binding.target not in accessors:
                    raise MonitorError(
                        f"attribute {binding.target!r} of {binding.name!r} does not resolve; "
                        f"known: {', '.join(sorted(accessors))}"
                    )
                declared, getter = accessors[binding.target]
                kind = binding.kind or declared
                self._readers.append(self._attribute_reader(binding, kind, getter))
            elif binding.source is BindingSource.PROBE:
                target = normalize_probe_spec(binding.target)
                if target not in probes:
                    raise MonitorError(f"probe {target!r} of {binding.name!r} is not declared")
                probes.referenced.add(target)
                if probe_is_flag(target):
                    kind = VarKind.BOOL
                    self._readers.append(lambda t=target: probes.fired(t))
                else:
                    kind = binding.kind or VarKind.INT
                    self._readers.append(lambda t=target: probes.value(t))
            elif binding.source is BindingSource.PHASE:
                if binding.target not in PHASE_HOOKS:
                    raise MonitorError(f"unknown kernel phase hook: {binding.target}")
                kind = VarKind.BOOL
                self._readers.append(lambda h=binding.target: self._current_hook == h)
            else:
                event_name = binding.target.removesuffix(NOTIFIED_SUFFIX)
                if event_name not in events:
                    raise MonitorError(f"unknown event: {event_name}")
                kind = VarKind.BOOL
                self.kernel.subscribe(events[event_name].hook, self._on_event)
                self._readers.append(lambda e=event_name: e in self._events_seen)
            decls.append(VarDecl(binding.name, kind, binding.description))
        return decls

    @staticmethod
    def _attribute_reader(
        binding: ObservedBinding, kind: VarKind, getter: Callable[[], Value]
    ) -> Callable[[], Value]:
        def read() -> Value:
            try:
                return kind.coerce(getter())
            except TraceError as e:
                raise MonitorError(f"attribute {binding.target!r}: {e}") from e

        return read

    def _resolve_terms(self) -> None:
        events: Mapping[str, Event] = self.kernel.events
        probes = self.model.probes
        hooks: set[str] = set()
        for term in self.resolution.terms:
            if term in PHASE_HOOKS:
                hooks.add(term)
            elif term.endswith(NOTIFIED_SUFFIX) and term.removesuffix(NOTIFIED_SUFFIX) in events:
                hooks.add(term)
            elif _is_probe_term(term) and normalize_probe_spec(term) in probes:
                name = normalize_probe_spec(term)
                probes.referenced.add(name)
                probes._listener = self._on_probe
                self._probe_terms.add(name)
            else:
                self._expr_terms.append(self._compile_term(term))
        if self._expr_terms:
            hooks.update(PHASE_HOOKS)
        for hook in sorted(hooks):
            self.kernel.subscribe(hook, self._on_hook)

    def _compile_term(self, term: str) -> Callable[[], bool]:
        try:
            formula = parse_formula(term)
            if not _is_propositional(formula):
                raise MonitorError(f"resolution term {term!r} must not use temporal operators")
            predicate = _compile_propositional(formula, self.registry)
        except BltlError as e:
            raise MonitorError(f"unresolvable resolution term {term!r}: {e}") from e
        return lambda: predicate(self._snapshot())

    def _on_event(self, hook: str) -> None:
        self._events_seen.add(hook.removesuffix(NOTIFIED_SUFFIX))

    def _on_probe(self, name: str) -> None:
        if name in self._probe_terms:
            self.sample(name)

    def _on_hook(self, hook: str) -> None:
        if hook in self.resolution.terms:
            self.sample(hook)
            return
        for holds in self._expr_terms:
            if holds():
                self.sample(hook)
                return

    def _snapshot(self) -> tuple[Value, ...]:
        return tuple(read() for read in self._readers)

    def sample(self, trigger: str) -> bool:
        """
        Append the current observed values at ``now`` unless this instant was sampled.

        Args:
            trigger: Hook or probe that fired

        Returns:
            Whether a state was appended

        Raises:
            MonitorError: If an accessor fails
        """
        if self.verdict.decided or self.trace.complete:
            return False
        kernel = self.kernel
        instant = (kernel.now, kernel.delta_count, kernel.phase.value, kernel.dispatch_count)
        if instant == self._last_instant:
            return False
        self._last_instant = instant
        self._current_hook = trigger
        try:
            values = self._snapshot()
        except MonitorError:
            raise
        except Exception as e:
            raise MonitorError(f"sampling failed at t={kernel.now}: {e}") from e
        finally:
            self._current_hook = None
        self.trace.append_values(values, kernel.now)
        self.model.probes.reset()
        self._events_seen.clear()
        if self.evaluator is not None:
            verdict = self.evaluator.verdict(0)
            if verdict.decided:
                self.verdict = verdict
                self.decided_by_monitor = True
                kernel.stop()
        return True

    def finish(self) -> Verdict:
        """
        Close the run after the kernel returned.

        The trace is marked complete unless the run was cut short by a decided verdict.

        Returns:
            Final verdict (INCONCLUSIVE only if there is no formula)
        """
        if not self.decided_by_monitor:
            self.trace.close()
            if self.evaluator is not None and len(self.trace) > 0:
                self.verdict = self.evaluator.verdict(0)
        logger.debug(
            "monitored_run_finished",
            samples=len(self.trace),
            now=self.kernel.now,
            verdict=self.verdict.value,
        )
        return self.verdict


def _is_probe_term(term: str) -> bool:
    try:
        normalize_probe_spec(term)
    except MonitorError:
        return False
    return True


def attach(
    model: Observable,
    bindings: Sequence[ObservedBinding],
    resolution: TemporalResolution | Sequence[str] | str,
    formula: Formula | None = None,
) -> MonitoredRun:
    """
    Attach a monitor to a model before its kernel runs.

    Args:
        model: Model instance exposing a kernel, accessors and probes
        bindings: Observed variables in registry order
        resolution: Temporal resolution (object, list of terms, or ``a | b`` text)
        formula: Optional formula fed online; the kernel stops once it is decided

    Returns:
        MonitoredRun with an empty trace

    Raises:
        MonitorError: If a binding or a resolution term does not resolve
    """
    if isinstance(resolution, str):
        resolution = TemporalResolution.parse(resolution)
    elif not isinstance(resolution, TemporalResolution):
        resolution = TemporalResolution(resolution)
    try:
        return MonitoredRun(model, bindings, resolution, formula)
    except BltlError as e:
        raise MonitorError(str(e)) from e
