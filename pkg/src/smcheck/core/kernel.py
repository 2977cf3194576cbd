"""Cooperative discrete-event kernel with SystemC scheduling semantics.

A run goes through the phases::

    initialize -> { evaluate -> update -> delta_notify }+ -> timed_notify -> { ... }+ -> ...

Process bodies are generator functions. A body suspends by yielding a wait request
obtained from :meth:`Kernel.wait_time` or :meth:`Kernel.wait_event`::

    def producer():
        while True:
            yield kernel.wait_time(1)
            ...

During the evaluate phase the next process is picked from the runnable set with
``uniform_int``, so the dispatch order is a function of the chooser's stream only.
Simulation time is an integer tick count.
"""

import heapq
import inspect
from collections.abc import Callable, Generator, Iterator
from enum import Enum
from typing import Any, NamedTuple, Protocol

from smcheck.utils.logging import get_logger

logger = get_logger()


class KernelError(Exception):
    """Kernel API misuse."""

    pass


class ProcessError(KernelError):
    """A process body raised an exception."""

    def __init__(self, process: str, time: int, cause: BaseException) -> None:
        self.process = process
        self.time = time
        self.cause = cause
        super().__init__(f"process {process!r} failed at t={time}: {cause!r}")

    def __reduce__(self) -> tuple[Any, ...]:
        return (ProcessError, (self.process, self.time, self.cause))


class Chooser(Protocol):
    """Source of scheduler decisions."""

    def uniform_int(self, n: int) -> int: ...


class Phase(str, Enum):
    """Kernel phase."""

    INITIALIZE = "initialize"
    EVALUATE = "evaluate"
    UPDATE = "update"
    DELTA_NOTIFY = "delta_notify"
    TIMED_NOTIFY = "timed_notify"
    FINISHED = "finished"


MON_INIT_PHASE_BEGIN = "MON_INIT_PHASE_BEGIN"
MON_INIT_PHASE_END = "MON_INIT_PHASE_END"
MON_EVALUATION_PHASE_BEGIN = "MON_EVALUATION_PHASE_BEGIN"
MON_EVALUATION_PHASE_END = "MON_EVALUATION_PHASE_END"
MON_UPDATE_PHASE_BEGIN = "MON_UPDATE_PHASE_BEGIN"
MON_UPDATE_PHASE_END = "MON_UPDATE_PHASE_END"
MON_DELTA_NOTIFY_PHASE_BEGIN = "MON_DELTA_NOTIFY_PHASE_BEGIN"
MON_DELTA_NOTIFY_PHASE_END = "MON_DELTA_NOTIFY_PHASE_END"
MON_TIMED_NOTIFY_PHASE_BEGIN = "MON_TIMED_NOTIFY_PHASE_BEGIN"
MON_TIMED_NOTIFY_PHASE_END = "MON_TIMED_NOTIFY_PHASE_END"
MON_DELTA_CYCLE_BEGIN = "MON_DELTA_CYCLE_BEGIN"
MON_DELTA_CYCLE_END = "MON_DELTA_CYCLE_END"

PHASE_HOOKS: tuple[str, ...] = (
    MON_INIT_PHASE_BEGIN,
    MON_INIT_PHASE_END,
    MON_EVALUATION_PHASE_BEGIN,
    MON_EVALUATION_PHASE_END,
    MON_UPDATE_PHASE_BEGIN,
    MON_UPDATE_PHASE_END,
    MON_DELTA_NOTIFY_PHASE_BEGIN,
    MON_DELTA_NOTIFY_PHASE_END,
    MON_TIMED_NOTIFY_PHASE_BEGIN,
    MON_TIMED_NOTIFY_PHASE_END,
    MON_DELTA_CYCLE_BEGIN,
    MON_DELTA_CYCLE_END,
)

NOTIFIED_SUFFIX = ".notified"


class NotifyKind(str, Enum):
    """Notification kind, strongest first."""

    IMMEDIATE = "immediate"
    DELTA = "delta"
    TIMED = "timed"


class ProcessStatus(str, Enum):
    """Scheduling status of a process."""

    RUNNABLE = "runnable"
    WAITING_EVENT = "waiting_event"
    WAITING_TIME = "waiting_time"
    TERMINATED = "terminated"


class WaitTime(NamedTuple):
    """Request to resume after ``ticks`` (0 means the next delta cycle)."""

    ticks: int


class WaitEvent(NamedTuple):
    """Request to resume when ``event`` is notified."""

    event: "Event"


class Event:
    """Notification point processes can wait on."""

    __slots__ = ("name", "kernel", "_waiters", "_delta_pending", "_timed_at", "_timed_token")

    def __init__(self, kernel: "Kernel", name: str) -> None:
        self.name = name
        self.kernel = kernel
        self._waiters: list[Process] = []
        self._delta_pending = False
        self._timed_at: int | None = None
        self._timed_token = 0

    @property
    def hook(self) -> str:
        """Name of the hook fired when this event triggers."""
        return self.name + NOTIFIED_SUFFIX

    @property
    def pending(self) -> NotifyKind | None:
        if self._delta_pending:
            return NotifyKind.DELTA
        if self._timed_at is not None:
            return NotifyKind.TIMED
        return None

    def notify(self, delay: int | None = None) -> None:
        """Immediate notification without delay, delta with 0, timed otherwise."""
        if delay is None:
            self.kernel.notify(self, NotifyKind.IMMEDIATE)
        elif delay == 0:
            self.kernel.notify(self, NotifyKind.DELTA)
        else:
            self.kernel.notify(self, NotifyKind.TIMED, delay)

    def __repr__(self) -> str:
        return f"Event({self.name!r})"


class Process:
    """Simulation thread driven by a generator body."""

    __slots__ = ("pid", "name", "body", "status", "_gen", "dont_initialize", "trigger", "wake_at")

    def __init__(
        self,
        pid: int,
        name: str,
        body: Callable[[], Any],
        dont_initialize: bool = False,
        trigger: Event | None = None,
    ) -> None:
        self.pid = pid
        self.name = name
        self.body = body
        self.status = ProcessStatus.RUNNABLE
        self._gen: Generator[Any, None, None] | None = None
        self.dont_initialize = dont_initialize
        self.trigger = trigger
        self.wake_at: int | None = None

    def __repr__(self) -> str:
        return f"Process({self.name!r}, {self.status.value})"


class Signal:
    """Primitive channel with evaluate/update semantics.

    Reads return ``current``; writes go to ``next`` and are committed in the update phase.
    """

    __slots__ = ("name", "kernel", "current", "next", "_update_requested", "value_changed")

    def __init__(self, kernel: "Kernel", name: str, initial: Any) -> None:
        self.name = name
        self.kernel = kernel
        self.current = initial
        self.next = initial
        self._update_requested = False
        self.value_changed = kernel.event(f"{name}.value_changed")

    def read(self) -> Any:
        return self.current

    def write(self, value: Any) -> None:
        """
        Request an update to ``value``.

        Raises:
            KernelError: If no process is running
        """
        if self.kernel.current is None:
            raise KernelError(f"signal {self.name!r} written outside a running process")
        self.next = value
        if not self._update_requested:
            self._update_requested = True
            self.kernel._update_requests.append(self)

    def _update(self) -> None:
        self._update_requested = False
        if self.next != self.current:
            self.current = self.next
            self.kernel.notify(self.value_changed, NotifyKind.DELTA)

    def __repr__(self) -> str:
        return f"Signal({self.name!r}, {self.current!r})"


class Kernel:
    """Single-owner simulation kernel."""

    def __init__(self, chooser: Chooser, name: str = "kernel") -> None:
        """
        Initialize the kernel.

        Args:
            chooser: Scheduler decision source (a RandomSource, or a scripted chooser)
            name: Name used in diagnostics
        """
        self.chooser = chooser
        self.name = name
        self.now = 0
        self.phase = Phase.INITIALIZE
        self.delta_count = 0
        self.dispatch_count = 0
        self.processes: list[Process] = []
        self.events: dict[str, Event] = {}
        self.signals: dict[str, Signal] = {}
        self.current: Process | None = None
        self._runnable: list[Process] = []
        self._update_requests: list[Signal] = []
        self._delta_events: list[Event] = []
        self._delta_wakeups: list[Process] = []
        self._timed: list[tuple[int, int, Event | Process]] = []
        self._seq = 0
        self._hooks: dict[str, list[Callable[[str], None]]] = {}
        self._started = False
        self._stopped = False
        # set when run() returned because the next activity lies beyond `until`
        self.cut_off = False

    # Construction

    def event(self, name: str) -> Event:
        """
        Create a named event.

        Raises:
            KernelError: If the name is taken
        """
        if name in self.events:
            raise KernelError(f"duplicate event name: {name}")
        event = Event(self, name)
        self.events[name] = event
        return event

    def signal(self, name: str, initial: Any) -> Signal:
        """Create a named signal with its value_changed event."""
        if name in self.signals:
            raise KernelError(f"duplicate signal name: {name}")
        signal = Signal(self, name, initial)
        self.signals[name] = signal
        return signal

    def spawn(
        self,
        name: str,
        body: Callable[[], Any],
        dont_initialize: bool = False,
        trigger: Event | None = None,
    ) -> int:
        """
        Register a process.

        Args:
            name: Process name
            body: Generator function (or plain function run to completion)
            dont_initialize: Skip the initialization dispatch and wait for ``trigger``
            trigger: Event that first activates a ``dont_initialize`` process

        Returns:
            Process id

        Raises:
            KernelError: If the simulation already started or the options are inconsistent
        """
        if self._started:
            raise KernelError(f"cannot spawn {name!r} after the simulation started")
        if dont_initialize and trigger is None:
            raise KernelError(f"process {name!r} uses dont_initialize without a trigger event")
        pid = len(self.processes)
        self.processes.append(Process(pid, name, body, dont_initialize, trigger))
        return pid

    def subscribe(self, hook: str, callback: Callable[[str], None]) -> None:
        """Call ``callback(hook)`` each time ``hook`` fires."""
        self._hooks.setdefault(hook, []).append(callback)

    # Process-side API

    def wait_time(self, ticks: int) -> WaitTime:
        """
        Build a timed wait request for the running process.

        Raises:
            KernelError: Outside a running process, or for a negative/non-integer delay
        """
        if self.current is None:
            raise KernelError("wait_time called outside a running process")
        if not isinstance(ticks, int) or ticks < 0:
            raise KernelError(f"wait_time needs a non-negative integer tick count, got {ticks!r}")
        return WaitTime(ticks)

    def wait_event(self, event: Event) -> WaitEvent:
        """
        Build an event wait request for the running process.

        Raises:
            KernelError: Outside a running process
        """
        if self.current is None:
            raise KernelError("wait_event called outside a running process")
        return WaitEvent(event)

    def notify(self, event: Event, kind: NotifyKind = NotifyKind.IMMEDIATE, delay: int = 0) -> None:
        """
        Notify an event.

        Override rule: immediate cancels anything pending; a delta notification replaces a
        pending timed one; a timed notification never replaces a pending delta and only
        replaces a later timed one.
        """
        if kind is NotifyKind.TIMED and delay == 0:
            kind = NotifyKind.DELTA
        if kind is NotifyKind.IMMEDIATE:
            self._cancel(event)
            self._trigger(event)
        elif kind is NotifyKind.DELTA:
            if event._delta_pending:
                return
            event._timed_at = None
            event._delta_pending = True
            self._delta_events.append(event)
        else:
            if delay < 0:
                raise KernelError(f"negative notification delay: {delay}")
            if event._delta_pending:
                return
            at = self.now + delay
            if event._timed_at is not None and event._timed_at <= at:
                return
            self._seq += 1
            event._timed_at = at
            event._timed_token = self._seq
            heapq.heappush(self._timed, (at, self._seq, event))

    def cancel(self, event: Event) -> None:
        """Drop any pending delta or timed notification of ``event``."""
        self._cancel(event)

    def stop(self) -> None:
        """Stop the run at the next scheduling point."""
        self._stopped = True

    @property
    def stopped(self) -> bool:
        return self._stopped

    # Scheduler

    def run(self, until: int | None = None, stop_when: Callable[[], bool] | None = None) -> None:
        """
        Execute the phase loop.

        Args:
            until: Do not advance the clock beyond this tick. A run cut off there ends
                without a final MON_TIMED_NOTIFY_PHASE_END and sets ``cut_off``; a run that
                runs out of activity fires it once more at the final time.
            stop_when: Predicate checked at phase boundaries; the run ends when it holds

        Raises:
            KernelError: If the kernel already ran
            ProcessError: If a process body raises
        """
        if self._started:
            raise KernelError("a kernel instance runs only once")
        self._started = True
        logger.debug("kernel_run_started", kernel=self.name, processes=len(self.processes))

        self.phase = Phase.INITIALIZE
        self._fire(MON_INIT_PHASE_BEGIN)
        for proc in self.processes:
            if proc.dont_initialize:
                proc.status = ProcessStatus.WAITING_EVENT
                proc.trigger._waiters.append(proc)  # type: ignore[union-attr]
            else:
                self._runnable.append(proc)
        self._fire(MON_INIT_PHASE_END)

        while not self._halted(stop_when):
            self._delta_cycles(stop_when)
            if self._halted(stop_when):
                break
            self.phase = Phase.TIMED_NOTIFY
            self._fire(MON_TIMED_NOTIFY_PHASE_BEGIN)
            at = self._next_time()
            if at is None:
                self._fire(MON_TIMED_NOTIFY_PHASE_END)
                break
            if until is not None and at > until:
                # the clock stays put, so no second end-of-timed-notify sample at `now`
                self.cut_off = True
                break
            self.now = at
            self._timed_notify(at)
            self._fire(MON_TIMED_NOTIFY_PHASE_END)

        self.phase = Phase.FINISHED
        logger.debug(
            "kernel_run_finished",
            kernel=self.name,
            now=self.now,
            delta_cycles=self.delta_count,
            dispatches=self.dispatch_count,
            stopped=self._stopped,
        )

    def _halted(self, stop_when: Callable[[], bool] | None) -> bool:
        if not self._stopped and stop_when is not None and stop_when():
            self._stopped = True
        return self._stopped

    def _delta_cycles(self, stop_when: Callable[[], bool] | None) -> None:
        # at least one delta cycle after initialization and after each timed notification
        first = True
        while first or self._runnable:
            first = False
            self.delta_count += 1
            self.phase = Phase.EVALUATE
            self._fire(MON_DELTA_CYCLE_BEGIN)
            self._fire(MON_EVALUATION_PHASE_BEGIN)
            while self._runnable and not self._stopped:
                proc = self._runnable.pop(self.chooser.uniform_int(len(self._runnable)))
                self._dispatch(proc)
            if self._halted(stop_when):
                return
            self._fire(MON_EVALUATION_PHASE_END)

            self.phase = Phase.UPDATE
            self._fire(MON_UPDATE_PHASE_BEGIN)
            requests, self._update_requests = self._update_requests, []
            for signal in requests:
                signal._update()
            self._fire(MON_UPDATE_PHASE_END)

            self.phase = Phase.DELTA_NOTIFY
            self._fire(MON_DELTA_NOTIFY_PHASE_BEGIN)
            events, self._delta_events = self._delta_events, []
            for event in events:
                if event._delta_pending:
                    event._delta_pending = False
                    self._trigger(event)
            wakeups, self._delta_wakeups = self._delta_wakeups, []
            for proc in wakeups:
                self._make_runnable(proc)
            self._fire(MON_DELTA_NOTIFY_PHASE_END)
            self._fire(MON_DELTA_CYCLE_END)
            if self._halted(stop_when):
                return

    def _next_time(self) -> int | None:
        while self._timed:
            at, seq, item = self._timed[0]
            if isinstance(item, Event) and item._timed_token != seq:
                heapq.heappop(self._timed)
                continue
            return at
        return None

    def _timed_notify(self, at: int) -> None:
        while self._timed and self._timed[0][0] == at:
            _, seq, item = heapq.heappop(self._timed)
            if isinstance(item, Event):
                if item._timed_token == seq and item._timed_at == at:
                    item._timed_at = None
                    self._trigger(item)
            elif item.status is ProcessStatus.WAITING_TIME:
                self._make_runnable(item)

    def _dispatch(self, proc: Process) -> None:
        self.current = proc
        self.dispatch_count += 1
        try:
            if proc._gen is None:
                result = proc.body()
                if not inspect.isgenerator(result):
                    self._terminate(proc)
                    return
                proc._gen = result
            request = next(proc._gen)
        except StopIteration:
            self._terminate(proc)
            return
        except KernelError:
            raise
        except Exception as e:
            logger.error("process_failed", process=proc.name, now=self.now, error=str(e))
            raise ProcessError(proc.name, self.now, e) from e
        finally:
            self.current = None
        self._suspend(proc, request)

    def _suspend(self, proc: Process, request: Any) -> None:
        if isinstance(request, WaitTime):
            proc.status = ProcessStatus.WAITING_TIME
            proc.wake_at = self.now + request.ticks
            if request.ticks == 0:
                self._delta_wakeups.append(proc)
            else:
                self._seq += 1
                heapq.heappush(self._timed, (proc.wake_at, self._seq, proc))
        elif isinstance(request, WaitEvent):
            proc.status = ProcessStatus.WAITING_EVENT
            request.event._waiters.append(proc)
        else:
            raise KernelError(
                f"process {proc.name!r} yielded {request!r}; expected wait_time() or wait_event()"
            )

    def _terminate(self, proc: Process) -> None:
        proc.status = ProcessStatus.TERMINATED
        proc._gen = None

    def _make_runnable(self, proc: Process) -> None:
        if proc.status is ProcessStatus.TERMINATED:
            return
        proc.status = ProcessStatus.RUNNABLE
        proc.wake_at = None
        self._runnable.append(proc)

    def _trigger(self, event: Event) -> None:
        waiters, event._waiters = event._waiters, []
        for proc in waiters:
            self._make_runnable(proc)
        self._fire(event.hook)

    def _cancel(self, event: Event) -> None:
        event._delta_pending = False
        event._timed_at = None

    def _fire(self, hook: str) -> None:
        callbacks = self._hooks.get(hook)
        if callbacks:
            for callback in callbacks:
                callback(hook)

    @property
    def runnable(self) -> list[Process]:
        return list(self._runnable)

    def __iter__(self) -> Iterator[Process]:
        return iter(self.processes)

    def __repr__(self) -> str:
        return f"Kernel({self.name!r}, now={self.now}, phase={self.phase.value})"
