"""Producer/consumer over a bounded FIFO channel.

The producer sends the message characters cyclically; each tick it attempts one blocking
write with probability ``p1``. The consumer attempts one blocking read per tick with
probability ``p2``. The channel blocks a full write on ``read_event`` and an empty read on
``write_event``; both events are notified immediately.
"""

from collections.abc import Generator
from typing import Any

from pydantic import BaseModel, Field

from smcheck.casestudies.base import ModelInstance, ModelSpec, attribute, probe
from smcheck.core.kernel import MON_TIMED_NOTIFY_PHASE_END, Kernel
from smcheck.core.rng import RandomSource
from smcheck.models.trace import VarKind

DEFAULT_MESSAGE = "&abcdefgh@"

Wait = Generator[Any, None, Any]


class FifoParams(BaseModel):
    """Parameters of the producer/consumer model."""

    p1: float = Field(default=0.9, description="Probability the producer writes in a tick", ge=0, le=1)
    p2: float = Field(default=0.9, description="Probability the consumer reads in a tick", ge=0, le=1)
    capacity: int = Field(default=10, description="Buffer slots", ge=1)
    message: str = Field(default=DEFAULT_MESSAGE, description="Characters sent cyclically", min_length=1)


class FifoChannel:
    """Circular buffer with blocking read and write."""

    def __init__(self, kernel: Kernel, capacity: int) -> None:
        self.kernel = kernel
        self.capacity = capacity
        self.data = [0] * capacity
        self.num_elements = 0
        self.first = 0
        self.write_event = kernel.event("write_event")
        self.read_event = kernel.event("read_event")

    def fifo_write(self, c: int) -> Wait:
        if self.num_elements == self.capacity:
            yield self.kernel.wait_event(self.read_event)
        self.data[(self.first + self.num_elements) % self.capacity] = c
        self.num_elements += 1
        self.write_event.notify()

    def fifo_read(self) -> Wait:
        if self.num_elements == 0:
            yield self.kernel.wait_event(self.write_event)
        c = self.data[self.first]
        self.num_elements -= 1
        self.first = (self.first + 1) % self.capacity
        self.read_event.notify()
        return c


class FifoModel(ModelInstance):
    """One run of the producer/consumer model."""

    PROBES = (
        "send:call", "send:entry", "send:exit", "send:return", "send:1",
        "receive:call", "receive:entry", "receive:exit", "receive:return", "receive:1",
    )

    def __init__(self, kernel: Kernel, rng: RandomSource, params: FifoParams) -> None:
        super().__init__(kernel, rng)
        self.params = params
        self.fifo = FifoChannel(kernel, params.capacity)
        self.message = [ord(ch) for ch in params.message]
        self.c_read = -1
        self.c_write = -1
        for name in self.PROBES:
            self.probes.declare(name)

        self.expose(VarKind.INT, lambda: self.c_read, "pnt_con->c_int", "c_read")
        self.expose(VarKind.INT, lambda: self.c_write, "pnt_pro->c_int", "c_write")
        self.expose(VarKind.INT, lambda: self.fifo.num_elements, "pnt_fifo->num_elements", "n_elements")

        kernel.spawn("producer", self.producer)
        kernel.spawn("consumer", self.consumer)

    def send(self, c: int) -> Wait:
        self.fire_probe("send:1", c)
        self.fire_probe("send:call")
        self.fire_probe("send:entry")
        yield from self.fifo.fifo_write(c)
        self.c_write = c
        self.fire_probe("send:exit")
        self.fire_probe("send:return")

    def receive(self) -> Wait:
        self.fire_probe("receive:call")
        self.fire_probe("receive:entry")
        c = yield from self.fifo.fifo_read()
        self.c_read = c
        self.fire_probe("receive:1", c)
        self.fire_probe("receive:exit")
        self.fire_probe("receive:return")

    def producer(self) -> Wait:
        position = 0
        while True:
            if self.rng.bernoulli(self.params.p1):
                yield from self.send(self.message[position])
                position = (position + 1) % len(self.message)
            yield self.kernel.wait_time(1)

    def consumer(self) -> Wait:
        while True:
            if self.rng.bernoulli(self.params.p2):
                yield from self.receive()
            yield self.kernel.wait_time(1)


def _instantiate(kernel: Kernel, rng: RandomSource, params: Any) -> ModelInstance:
    return FifoModel(kernel, rng, params)


def build_fifo(params: FifoParams | None = None) -> ModelSpec:
    """
    Build the producer/consumer model.

    Observed by default: ``c_read`` and ``c_write`` (last character code read/written,
    initially -1), ``n_elements``, and the probe flags ``send_start`` (``send:call``) and
    ``send_done`` (``send:return``). One tick is one nanosecond.
    """
    return ModelSpec(
        name="fifo",
        description="Producer and consumer exchanging a message over a bounded FIFO",
        params=params or FifoParams(),
        bindings=(
            attribute("c_read", VarKind.INT, "pnt_con->c_int", "Last character read by the consumer"),
            attribute("c_write", VarKind.INT, "pnt_pro->c_int", "Last character written by the producer"),
            attribute("n_elements", VarKind.INT, "pnt_fifo->num_elements", "Characters in the buffer"),
            probe("send_start", "send:call", "Producer is about to call send()"),
            probe("send_done", "send:return", "send() just returned"),
        ),
        resolution=(MON_TIMED_NOTIFY_PHASE_END,),
        tick="1 ns",
        factory=_instantiate,
    )


def latency_query(horizon: int, latency: int) -> str:
    """Probability that each message arrives completely within ``latency`` over ``horizon``."""
    return f"Pr(G<={horizon}((c_read = '&') => (F<={latency}(c_read = '@'))))"


def occupancy_query(horizon: int, low: int, high: int, theta: float) -> str:
    """Test that the buffer occupancy stays in [low, high] with probability at least theta."""
    return f"Pr>={theta}(G<={horizon}(({low} <= n_elements) & (n_elements <= {high})))"
