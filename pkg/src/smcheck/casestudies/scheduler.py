"""Scheduler-coverage examples.

Each example spawns threads made of atomic segments separated by ``wait_time(1)``. Every
segment appends its thread letter to the run's order string, so the string records which
interleaving the random scheduler picked. With ``n`` threads of ``s`` segments there are
``(n!)**s`` reachable orders.
"""

import math
from collections.abc import Generator, Iterator
from typing import Any

from pydantic import BaseModel, Field

from smcheck.casestudies.base import ModelError, ModelInstance, ModelSpec, attribute
from smcheck.core.kernel import MON_DELTA_CYCLE_END, Kernel
from smcheck.core.rng import RandomSource
from smcheck.models.trace import VarKind
from smcheck.utils.logging import get_logger

logger = get_logger()

# example number -> (threads, segments per thread)
EXAMPLES: dict[int, tuple[int, int]] = {
    1: (2, 1),
    2: (2, 2),
    3: (3, 3),
}

THREAD_LETTERS = "ABCDEFGH"


class SchedParams(BaseModel):
    """Selects one of the scheduler examples."""

    example: int = Field(default=3, description="Example number (1, 2 or 3)")


def example_shape(k: int) -> tuple[int, int]:
    """
    Threads and segments per thread of example ``k``.

    Raises:
        ModelError: If ``k`` is not a known example
    """
    try:
        return EXAMPLES[k]
    except KeyError:
        raise ModelError(f"unknown scheduler example {k}; expected one of {sorted(EXAMPLES)}") from None


def order_count(k: int) -> int:
    """Number of distinct dispatch orders of example ``k``."""
    threads, segments = example_shape(k)
    return math.factorial(threads) ** segments


class SchedulerModel(ModelInstance):
    """Threads whose segment dispatch order is recorded in ``artifacts['order']``."""

    def __init__(self, kernel: Kernel, rng: RandomSource, params: SchedParams) -> None:
        super().__init__(kernel, rng)
        self.threads, self.segments_per_thread = example_shape(params.example)
        self.order: list[str] = []
        self.segments = 0
        self.artifacts["order"] = ""
        self.expose(VarKind.INT, lambda: self.segments, "segments")
        for i in range(self.threads):
            kernel.spawn(f"thread_{THREAD_LETTERS[i]}", self._thread_body(THREAD_LETTERS[i]))

    def _thread_body(self, letter: str) -> Any:
        def body() -> Generator[Any, None, None]:
            for segment in range(self.segments_per_thread):
                if segment:
                    yield self.kernel.wait_time(1)
                self.order.append(letter)
                self.segments += 1
                self.artifacts["order"] = "".join(self.order)

        return body


def _instantiate(kernel: Kernel, rng: RandomSource, params: Any) -> ModelInstance:
    return SchedulerModel(kernel, rng, params)


def build_sched_example(k: int = 3) -> ModelSpec:
    """
    Build scheduler example ``k``.

    Example 1 has two one-segment threads (2 orders), example 2 two threads with one wait
    each (4 orders), example 3 three threads with two waits each (216 orders).

    Raises:
        ModelError: If ``k`` is not 1, 2 or 3
    """
    example_shape(k)
    return ModelSpec(
        name="sched",
        description=f"Scheduler coverage example {k}",
        params=SchedParams(example=k),
        bindings=(attribute("segments", VarKind.INT, description="Segments executed so far"),),
        resolution=(MON_DELTA_CYCLE_END,),
        tick="1 ns",
        factory=_instantiate,
    )


class ScriptedChooser:
    """Scheduler decision source replaying a fixed prefix of choices.

    Past the prefix it always picks index 0. Every call records the number of runnable
    processes it chose among, so a caller can enumerate the decision tree.
    """

    def __init__(self, script: list[int] | None = None) -> None:
        self.script = list(script or [])
        self.ranges: list[int] = []

    def uniform_int(self, n: int) -> int:
        position = len(self.ranges)
        self.ranges.append(n)
        if position < len(self.script):
            choice = self.script[position]
            if not 0 <= choice < n:
                raise ModelError(f"scripted choice {choice} out of range for {n} runnable processes")
            return choice
        return 0


def run_order(spec: ModelSpec, seed: int = 0, chooser: ScriptedChooser | None = None) -> str:
    """Run a scheduler example once and return its dispatch order string."""
    instance = spec.instantiate(seed, chooser)
    instance.kernel.run()
    return str(instance.artifacts["order"])


def _decision_sequences(spec: ModelSpec) -> Iterator[str]:
    script: list[int] = []
    while True:
        chooser = ScriptedChooser(script)
        yield run_order(spec, chooser=chooser)
        ranges = chooser.ranges
        # odometer step: bump the last decision that still has an untried alternative
        choices = script + [0] * (len(ranges) - len(script))
        position = len(ranges) - 1
        while position >= 0 and choices[position] + 1 >= ranges[position]:
            position -= 1
        if position < 0:
            return
        script = choices[:position] + [choices[position] + 1]


def enumerate_orders(k: int) -> set[str]:
    """
    Every dispatch order string example ``k`` can produce.

    Explores the scheduler decision tree depth first with scripted choices instead of
    random seeds.
    """
    spec = build_sched_example(k)
    orders = set(_decision_sequences(spec))
    logger.debug("orders_enumerated", example=k, orders=len(orders))
    return orders
