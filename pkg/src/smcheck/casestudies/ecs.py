"""Embedded control system reliability model.

An input processor reads 50 groups of 3 sensors, an output processor drives 30 groups of 2
actuators, and a main processor polls both every cycle. Components fail after exponential
delays; the I/O processors also suffer transient faults repaired by a reboot. The system
shuts down when too few sensor or actuator groups work, when the main processor fails, or
when more than K consecutive cycles are skipped. One tick is 30 seconds.
"""

from collections.abc import Generator
from typing import Any

from pydantic import BaseModel, Field, model_validator

from smcheck.casestudies.base import ModelInstance, ModelSpec, attribute, to_ticks
from smcheck.core.kernel import MON_TIMED_NOTIFY_PHASE_BEGIN, Kernel
from smcheck.core.rng import RandomSource
from smcheck.models.trace import VarKind

TICKS_PER_DAY = 2880
TICKS_PER_MONTH = 30 * TICKS_PER_DAY
TICKS_PER_YEAR = 12 * TICKS_PER_MONTH

# processor status values
FAILED = 0
TRANSIENT = 1
WORKING = 2

Wait = Generator[Any, None, None]


class EcsParams(BaseModel):
    """Parameters of the embedded control system."""

    sensor_groups: int = Field(default=50, description="Number of sensor groups", ge=1)
    sensors_per_group: int = Field(default=3, description="Sensors in a group", ge=1)
    sensor_group_quorum: int = Field(default=2, description="Working sensors a group needs", ge=1)
    sensor_quorum: int = Field(default=37, description="Working sensor groups the system needs", ge=0)
    actuator_groups: int = Field(default=30, description="Number of actuator groups", ge=1)
    actuators_per_group: int = Field(default=2, description="Actuators in a group", ge=1)
    actuator_group_quorum: int = Field(default=1, description="Working actuators a group needs", ge=1)
    actuator_quorum: int = Field(default=27, description="Working actuator groups the system needs", ge=0)
    max_skipped: int = Field(default=4, description="K: consecutive skipped cycles tolerated", ge=0)
    cycle: int = Field(default=2, description="Poll period in ticks", ge=1)
    mean_sensor: float = Field(default=TICKS_PER_MONTH, description="Sensor mean time to failure", gt=0)
    mean_actuator: float = Field(default=2 * TICKS_PER_MONTH, description="Actuator mean time to failure", gt=0)
    mean_processor: float = Field(default=TICKS_PER_YEAR, description="Processor mean time to permanent failure", gt=0)
    mean_transient: float = Field(default=TICKS_PER_DAY, description="I/O processor mean time to transient failure", gt=0)
    mean_reboot: float = Field(default=1.0, description="I/O processor mean reboot delay", gt=0)

    @model_validator(mode="after")
    def validate_quorums(self) -> "EcsParams":
        """Quorums cannot exceed what they count."""
        if self.sensor_group_quorum > self.sensors_per_group:
            raise ValueError("sensor_group_quorum exceeds sensors_per_group")
        if self.actuator_group_quorum > self.actuators_per_group:
            raise ValueError("actuator_group_quorum exceeds actuators_per_group")
        if self.sensor_quorum > self.sensor_groups:
            raise ValueError("sensor_quorum exceeds sensor_groups")
        if self.actuator_quorum > self.actuator_groups:
            raise ValueError("actuator_quorum exceeds actuator_groups")
        return self


class IoProcessor:
    """Input or output processor state."""

    def __init__(self, name: str) -> None:
        self.name = name
        self.status = WORKING
        self.reboots = 0


class EcsModel(ModelInstance):
    """One run of the embedded control system."""

    def __init__(self, kernel: Kernel, rng: RandomSource, params: EcsParams) -> None:
        super().__init__(kernel, rng)
        self.params = params
        self.sensors_alive = [params.sensors_per_group] * params.sensor_groups
        self.actuators_alive = [params.actuators_per_group] * params.actuator_groups
        self.number_sensors = params.sensor_groups
        self.number_actuators = params.actuator_groups
        self.proci = IoProcessor("input")
        self.proco = IoProcessor("output")
        self.main_status = 1
        self.skipped = 0
        self.down = False
        self.reward_up = 0
        self.reward_danger = 0
        self.reward_shutdown = 0
        self._expose_state()

        # one process per sensor and actuator, each sleeping through its sampled lifetime;
        # a failure is a dispatch of that process, not a precomputed timed notification
        for g in range(params.sensor_groups):
            for s in range(params.sensors_per_group):
                kernel.spawn(f"sensor_{g}_{s}", self._sensor_body(g))
        for g in range(params.actuator_groups):
            for a in range(params.actuators_per_group):
                kernel.spawn(f"actuator_{g}_{a}", self._actuator_body(g))
        kernel.spawn("main", self.main_processor)
        kernel.spawn("proci", lambda: self.io_processor(self.proci))
        kernel.spawn("proco", lambda: self.io_processor(self.proco))
        kernel.spawn("poll", self.poll)
        kernel.spawn("reward", self.reward)

    def _expose_state(self) -> None:
        expose = self.expose
        expose(VarKind.INT, lambda: self.number_sensors, "number_sensors")
        expose(VarKind.INT, lambda: self.number_actuators, "number_actuators")
        expose(VarKind.INT, lambda: self.proci.status, "proci_status")
        expose(VarKind.INT, lambda: self.proco.status, "proco_status")
        expose(VarKind.INT, lambda: self.main_status, "main_status")
        expose(VarKind.INT, lambda: self.skipped, "skipped")
        expose(VarKind.INT, lambda: self.proci.reboots, "reboot_count_i")
        expose(VarKind.INT, lambda: self.proco.reboots, "reboot_count_o")
        expose(VarKind.INT, lambda: self.proci.reboots + self.proco.reboots, "reboot_count")
        expose(VarKind.INT, lambda: self.reward_up, "reward_up")
        expose(VarKind.INT, lambda: self.reward_danger, "reward_danger")
        expose(VarKind.INT, lambda: self.reward_shutdown, "reward_shutdown")
        expose(VarKind.BOOL, self.failure_1, "failure_1")
        expose(VarKind.BOOL, self.failure_2, "failure_2")
        expose(VarKind.BOOL, self.failure_3, "failure_3")
        expose(VarKind.BOOL, self.failure_4, "failure_4")
        expose(VarKind.BOOL, self.shutdown, "shutdown")
        expose(VarKind.BOOL, lambda: self.down, "system_down")

    # Failure predicates

    def failure_1(self) -> bool:
        return self.number_sensors < self.params.sensor_quorum and self.proci.status == WORKING

    def failure_2(self) -> bool:
        return self.number_actuators < self.params.actuator_quorum and self.proco.status == WORKING

    def failure_3(self) -> bool:
        return self.skipped > self.params.max_skipped

    def failure_4(self) -> bool:
        return self.main_status == 0

    def shutdown(self) -> bool:
        return self.failure_1() or self.failure_2() or self.failure_3() or self.failure_4()

    def is_up(self) -> bool:
        """Every monitored component is functional."""
        return (
            not self.down
            and self.main_status == 1
            and self.proci.status == WORKING
            and self.proco.status == WORKING
            and self.number_sensors >= self.params.sensor_quorum
            and self.number_actuators >= self.params.actuator_quorum
        )

    # Processes

    def _sensor_body(self, group: int) -> Any:
        def body() -> Wait:
            yield self.kernel.wait_time(to_ticks(self.rng.exponential(self.params.mean_sensor)))
            if self.down:
                return
            self.sensors_alive[group] -= 1
            if self.sensors_alive[group] == self.params.sensor_group_quorum - 1:
                self.number_sensors -= 1

        return body

    def _actuator_body(self, group: int) -> Any:
        def body() -> Wait:
            yield self.kernel.wait_time(to_ticks(self.rng.exponential(self.params.mean_actuator)))
            if self.down:
                return
            self.actuators_alive[group] -= 1
            if self.actuators_alive[group] == self.params.actuator_group_quorum - 1:
                self.number_actuators -= 1

        return body

    def main_processor(self) -> Wait:
        yield self.kernel.wait_time(to_ticks(self.rng.exponential(self.params.mean_processor)))
        if self.down:
            return
        self.main_status = 0
        self.down = True

    def io_processor(self, proc: IoProcessor) -> Wait:
        params = self.params
        while True:
            permanent = to_ticks(self.rng.exponential(params.mean_processor))
            transient = to_ticks(self.rng.exponential(params.mean_transient))
            if permanent <= transient:
                yield self.kernel.wait_time(permanent)
                if not self.down:
                    proc.status = FAILED
                return
            yield self.kernel.wait_time(transient)
            if self.down:
                return
            proc.status = TRANSIENT
            yield self.kernel.wait_time(to_ticks(self.rng.exponential(params.mean_reboot)))
            if self.down:
                return
            proc.status = WORKING
            proc.reboots += 1

    def poll(self) -> Wait:
        params = self.params
        while True:
            yield self.kernel.wait_time(params.cycle)
            # let failures of this tick settle first
            yield self.kernel.wait_time(0)
            if self.down:
                return
            if self.proci.status != WORKING or self.proco.status != WORKING:
                self.skipped += 1
            else:
                self.skipped = 0
            if self.failure_3() or self.failure_1() or self.failure_2():
                self.down = True
                return

    def reward(self) -> Wait:
        while True:
            yield self.kernel.wait_time(1)
            yield self.kernel.wait_time(0)
            if self.down:
                self.reward_shutdown += 1
            elif self.is_up():
                self.reward_up += 1
            else:
                self.reward_danger += 1


def _instantiate(kernel: Kernel, rng: RandomSource, params: Any) -> ModelInstance:
    return EcsModel(kernel, rng, params)


ECS_VARIABLES: tuple[tuple[str, VarKind, str], ...] = (
    ("number_sensors", VarKind.INT, "Functional sensor groups"),
    ("number_actuators", VarKind.INT, "Functional actuator groups"),
    ("proci_status", VarKind.INT, "Input processor: 0 failed, 1 transient fault, 2 working"),
    ("proco_status", VarKind.INT, "Output processor: 0 failed, 1 transient fault, 2 working"),
    ("main_status", VarKind.INT, "Main processor: 0 failed, 1 working"),
    ("skipped", VarKind.INT, "Consecutive skipped cycles"),
    ("reboot_count_i", VarKind.INT, "Reboots of the input processor"),
    ("reboot_count_o", VarKind.INT, "Reboots of the output processor"),
    ("reboot_count", VarKind.INT, "Reboots of both I/O processors"),
    ("reward_up", VarKind.INT, "Ticks spent up"),
    ("reward_danger", VarKind.INT, "Ticks spent in danger"),
    ("reward_shutdown", VarKind.INT, "Ticks spent shut down"),
    ("failure_1", VarKind.BOOL, "Too few sensor groups, reported by a working input processor"),
    ("failure_2", VarKind.BOOL, "Too few actuator groups, reported by a working output processor"),
    ("failure_3", VarKind.BOOL, "More than K consecutive skipped cycles"),
    ("failure_4", VarKind.BOOL, "Main processor failed"),
    ("shutdown", VarKind.BOOL, "Any failure holds"),
    ("system_down", VarKind.BOOL, "The system has been shut down"),
)


def build_ecs(params: EcsParams | None = None) -> ModelSpec:
    """
    Build the embedded control system.

    Sampling happens at the beginning of every timed-notification phase, after all delta
    cycles of a tick, so the three reward counters sum to the current tick at each sample.

    Sensors and actuators run as per-component processes rather than as pre-sampled timed
    notifications on shared events. The lifetimes have the same exponential law either way.
    """
    return ModelSpec(
        name="ecs",
        description="Embedded control system with sensor/actuator redundancy and I/O reboots",
        params=params or EcsParams(),
        bindings=tuple(attribute(name, kind, description=text) for name, kind, text in ECS_VARIABLES),
        resolution=(MON_TIMED_NOTIFY_PHASE_BEGIN,),
        tick="30 s",
        factory=_instantiate,
    )


def dependability_queries(horizon: int) -> list[str]:
    """
    Queries of the standard ECS dependability analysis over ``horizon`` ticks.

    Eventual failure of each kind, first failure of each kind, expected time per state
    class, expected reboots, and expected functional groups.
    """
    queries = [f"Pr(F<={horizon}(failure_{i}))" for i in range(1, 5)]
    queries += [f"Pr((!shutdown) U<={horizon} (failure_{i}))" for i in range(1, 5)]
    for name in (
        "reward_up",
        "reward_danger",
        "reward_shutdown",
        "reboot_count_i",
        "reboot_count_o",
        "reboot_count",
        "number_sensors",
        "number_actuators",
    ):
        queries.append(f"X<={horizon}({name})")
    return queries
