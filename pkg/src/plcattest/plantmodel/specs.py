"""Plant description types and the alarm threshold mapper.

A plant is tanks + sensors + actuators + flow paths, plus the wiring that
connects program output commands to actuators.  Sensor readings derive
from tank levels (level sensors), from active flow paths (flow sensors)
or from a bounded integrator (e.g. filter differential pressure).

State conventions: pumps are 0=off / 1=on; valves are 0=changing /
1=closed / 2=open (so ``HMI_MV201.Status = 2`` reads "MV201 open").
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..stlang import Program, VarClass
from ..stlang.ast import decl_map

VALVE_CHANGING, VALVE_CLOSED, VALVE_OPEN = 0, 1, 2
PUMP_OFF, PUMP_ON = 0, 1

#: Alarm column suffixes in trace / feature order, aligned with
#: alarms_from_reading's (H, HH, L, LL) result order.
ALARM_SUFFIXES = ("AH", "AHH", "AL", "ALL")


@dataclass(frozen=True)
class SensorSpec:
    ident: str
    unit: str
    range_min: float
    range_max: float
    ll: float
    l: float
    h: float
    hh: float

    def __post_init__(self):
        if not (self.ll < self.l < self.h < self.hh):
            raise ValueError(f"{self.ident}: thresholds must satisfy LL < L < H < HH")
        if not (self.range_min <= self.ll and self.hh <= self.range_max):
            raise ValueError(f"{self.ident}: thresholds must lie within the sensor range")

    @property
    def span(self) -> float:
        return self.range_max - self.range_min


def alarms_from_reading(reading: float, spec: SensorSpec) -> tuple[int, int, int, int]:
    """Threshold a reading into its (H, HH, L, LL) alarm bits.

    Boundary convention: high alarms fire at reading >= threshold, low
    alarms at reading <= threshold, so HH implies H and LL implies L.
    """
    if not math.isfinite(reading):
        raise ValueError(f"non-finite reading {reading!r}")
    return (
        1 if reading >= spec.h else 0,
        1 if reading >= spec.hh else 0,
        1 if reading <= spec.l else 0,
        1 if reading <= spec.ll else 0,
    )


def alarm_ident(sensor: str, suffix: str) -> str:
    return f"HMI_{sensor}.{suffix}"


def status_ident(actuator: str) -> str:
    return f"HMI_{actuator}.Status"


@dataclass(frozen=True)
class TankSpec:
    ident: str
    capacity: float


@dataclass(frozen=True)
class ActuatorSpec:
    ident: str
    kind: str  # "pump" | "valve"
    cardinality: int

    def __post_init__(self):
        if self.kind == "pump" and self.cardinality != 2:
            raise ValueError(f"{self.ident}: pumps have exactly 2 states")
        if self.kind == "valve" and self.cardinality < 3:
            raise ValueError(f"{self.ident}: valves need >= 3 states (open/closed/changing)")


@dataclass(frozen=True)
class FlowSpec:
    """Water moves along this path at ``rate`` iff all conditions hold."""

    ident: str
    source: str  # tank ident or "" (external supply)
    sink: str    # tank ident or "" (drain / next subsystem)
    rate: float
    requires: tuple[tuple[str, int], ...]  # (actuator, state) atoms, AND-combined


# sensor sources ------------------------------------------------------------

@dataclass(frozen=True)
class LevelSource:
    tank: str


@dataclass(frozen=True)
class FlowSource:
    flows: tuple[str, ...]  # reading = sum of active rates


@dataclass(frozen=True)
class IntegratorSource:
    """Bounded integrator, e.g. filter fouling pressure."""

    rise_rate: float
    rise_any: tuple[tuple[str, int], ...]  # integrate up while ANY atom holds
    fall_rate: float
    fall_any: tuple[tuple[str, int], ...]
    initial: float = 0.0


SensorSource = LevelSource | FlowSource | IntegratorSource

#: How a program output value maps onto its actuator.
#:   bool-pump:  0 -> off, 1 -> on
#:   bool-valve: 0 -> target closed, 1 -> target open
#:   state:      the value itself is the target state (valves: 0 means hold)
COMMAND_MODES = ("bool-pump", "bool-valve", "state")


@dataclass(frozen=True)
class WiringEntry:
    program: str
    output: str
    actuator: str
    mode: str


@dataclass(frozen=True)
class NoiseSpec:
    enabled: bool = False
    rel_amplitude: float = 0.0  # uniform in +-rel_amplitude * sensor span


@dataclass(frozen=True)
class PlantConfig:
    dt: float
    valve_transition_steps: int
    tanks: tuple[TankSpec, ...]
    sensors: tuple[SensorSpec, ...]
    sensor_sources: dict
    actuators: tuple[ActuatorSpec, ...]
    flows: tuple[FlowSpec, ...]
    wiring: tuple[WiringEntry, ...]
    program_files: tuple[str, ...] = ()
    noise: NoiseSpec = field(default_factory=NoiseSpec)

    def sensor(self, ident: str) -> SensorSpec:
        return next(s for s in self.sensors if s.ident == ident)

    def actuator(self, ident: str) -> ActuatorSpec:
        return next(a for a in self.actuators if a.ident == ident)

    def wiring_for(self, prog_name: str) -> tuple[WiringEntry, ...]:
        return tuple(w for w in self.wiring if w.program == prog_name)


@dataclass(frozen=True)
class TraceRow:
    """One historian row: readings plus the derived/observed discrete state."""

    t: float
    readings: dict  # sensor ident -> float
    alarms: dict    # alarm ident (HMI_<sensor>.<suffix>) -> 0/1
    states: dict    # actuator ident -> int
    vars: dict      # program variable ident -> value (incl. SR latch bits)

    def input_value(self, ident: str, var_class: VarClass, config: PlantConfig):
        if var_class is VarClass.ALARM_BIT:
            return self.alarms[ident]
        if var_class is VarClass.ACTUATOR_STATE:
            return self.states[_status_target(ident)]
        if var_class is VarClass.SENSOR_READING:
            return self.readings[_reading_target(ident)]
        return self.vars[ident]


def _status_target(ident: str) -> str:
    # HMI_<ACT>.Status -> <ACT>
    return ident[len("HMI_"):-len(".Status")]


def _reading_target(ident: str) -> str:
    return ident[len("HMI_"):] if ident.startswith("HMI_") else ident


def bound_sensor(ident: str) -> str | None:
    """Sensor ident an alarm input refers to, or None if not alarm-shaped."""
    if not ident.startswith("HMI_") or "." not in ident:
        return None
    base, _, suffix = ident[len("HMI_"):].rpartition(".")
    return base if suffix in ALARM_SUFFIXES else None


def alarm_suffix(ident: str) -> str:
    return ident.rpartition(".")[2]


def validate_bindings(programs: list[Program], config: PlantConfig) -> None:
    """Every sensor/alarm/actuator-class input must map to a plant element."""
    sensor_idents = {s.ident for s in config.sensors}
    actuator_idents = {a.ident for a in config.actuators}
    for prog in programs:
        dm = decl_map(prog)
        for ident in prog.input_order:
            cls = dm[ident].var_class
            if cls is VarClass.ALARM_BIT:
                sensor = bound_sensor(ident)
                if sensor not in sensor_idents:
                    raise ValueError(f"{prog.name}: alarm input {ident} has no sensor")
            elif cls is VarClass.ACTUATOR_STATE:
                if not ident.startswith("HMI_") or not ident.endswith(".Status") \
                        or _status_target(ident) not in actuator_idents:
                    raise ValueError(f"{prog.name}: state input {ident} has no actuator")
                card = dm[ident].kind.card or 2
                if card != config.actuator(_status_target(ident)).cardinality:
                    raise ValueError(f"{prog.name}: {ident} cardinality mismatch")
            elif cls is VarClass.SENSOR_READING:
                if _reading_target(ident) not in sensor_idents:
                    raise ValueError(f"{prog.name}: reading input {ident} has no sensor")
        for w in config.wiring_for(prog.name):
            if w.output not in prog.output_order:
                raise ValueError(f"{prog.name}: wiring references unknown output {w.output}")
            if w.actuator not in actuator_idents:
                raise ValueError(f"{prog.name}: wiring references unknown actuator {w.actuator}")
        wired = {w.output for w in config.wiring_for(prog.name)}
        missing = set(prog.output_order) - wired
        if missing:
            raise ValueError(f"{prog.name}: outputs without wiring: {sorted(missing)}")
