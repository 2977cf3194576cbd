"""Buildable model specifications and the runtime base of model instances."""

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from typing import Any

from pydantic import BaseModel

from smcheck.core.kernel import Chooser, Kernel
from smcheck.core.monitor import BindingSource, ObservedBinding, ProbeBoard
from smcheck.core.rng import RandomSource
from smcheck.models.trace import Value, VarDecl, VarKind, VarRegistry


class ModelError(Exception):
    """Unknown model, invalid parameters or invalid example number."""

    pass


class ModelInstance:
    """Runtime state of one model run.

    Subclasses create their processes, events and state on top of ``kernel`` and publish
    attribute accessors with :meth:`expose` for the monitor.
    """

    def __init__(self, kernel: Kernel, rng: RandomSource) -> None:
        self.kernel = kernel
        self.rng = rng
        self.probes = ProbeBoard()
        self.artifacts: dict[str, Any] = {}
        self._accessors: dict[str, tuple[VarKind, Callable[[], Value]]] = {}

    def expose(self, kind: VarKind, getter: Callable[[], Value], *paths: str) -> None:
        """Publish an attribute under one or more accessor paths."""
        for path in paths:
            self._accessors[path] = (kind, getter)

    @property
    def accessors(self) -> dict[str, tuple[VarKind, Callable[[], Value]]]:
        return self._accessors

    def fire_probe(self, name: str, value: Value | None = None) -> None:
        """Mark that execution reached a probe location."""
        self.probes.fire_probe(name, value)


ModelFactory = Callable[[Kernel, RandomSource, Any], ModelInstance]


@dataclass(frozen=True)
class ModelSpec:
    """A model with fixed parameters, ready to be instantiated once per run."""

    name: str
    description: str
    params: BaseModel
    bindings: tuple[ObservedBinding, ...]
    resolution: tuple[str, ...]
    tick: str
    factory: ModelFactory = field(repr=False)

    @property
    def registry(self) -> VarRegistry:
        """Registry of the default observed variables."""
        decls = []
        for binding in self.bindings:
            kind = binding.kind or VarKind.BOOL
            decls.append(VarDecl(binding.name, kind, binding.description))
        return VarRegistry(decls)

    def binding(self, name: str) -> ObservedBinding:
        """
        Look up a default observed variable.

        Raises:
            ModelError: If the model publishes no such variable
        """
        for binding in self.bindings:
            if binding.name == name:
                return binding
        raise ModelError(f"model {self.name!r} has no observed variable {name!r}")

    def instantiate(self, seed: int, chooser: Chooser | None = None) -> ModelInstance:
        """
        Build a fresh model instance for one run.

        The scheduler draws from stream 0 of the seed and the model from stream 1, unless
        a scripted ``chooser`` replaces the scheduler stream.

        Args:
            seed: Run seed
            chooser: Optional scheduler decision source

        Returns:
            Model instance whose kernel has not run yet
        """
        source = RandomSource(seed)
        kernel = Kernel(chooser if chooser is not None else source.fork(0), name=self.name)
        return self.factory(kernel, source.fork(1), self.params)


def attribute(name: str, kind: VarKind, path: str | None = None, description: str = "") -> ObservedBinding:
    """Shorthand for an attribute binding whose accessor path defaults to its name."""
    return ObservedBinding(name, BindingSource.ATTRIBUTE, path or name, kind, description)


def probe(name: str, location: str, description: str = "") -> ObservedBinding:
    """Shorthand for a boolean probe-location binding."""
    return ObservedBinding(name, BindingSource.PROBE, location, VarKind.BOOL, description)


def to_ticks(duration: float) -> int:
    """Round a sampled duration to whole ticks (half up)."""
    return int(math.floor(duration + 0.5))


def merge_bindings(
    defaults: Sequence[ObservedBinding], extra: Sequence[ObservedBinding]
) -> tuple[ObservedBinding, ...]:
    """Append ``extra`` bindings to ``defaults``; an extra binding replaces a default of the same name."""
    replaced = {b.name: b for b in extra}
    merged = [replaced.pop(b.name, b) for b in defaults]
    merged.extend(b for b in extra if b.name in replaced)
    return tuple(merged)
