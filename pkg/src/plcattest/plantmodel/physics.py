"""Toy plant physics and the closed-loop trace generator.

Tank levels follow a forward-Euler update clamped to [0, capacity];
integrator sensors (differential pressure) accumulate within their
configured bounds.  The closed loop per step: derive readings, threshold
them into alarms, scan every program on the historian-style snapshot,
then apply the commanded actuator states with per-kind transition delay
(pumps switch on the next step, valves pass through "changing" for a
configured number of steps).

This generator stands in for runs of a real plant: it produces
historian-style normal traces for importance-analysis seeding and for
attester validation.  It is deliberately simple and is not a model of
any real water-treatment process.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..stlang import Program, VarClass, scan_ex
from ..stlang.ast import decl_map
from .specs import (
    ALARM_SUFFIXES,
    FlowSource,
    IntegratorSource,
    LevelSource,
    PlantConfig,
    TraceRow,
    VALVE_CHANGING,
    alarm_ident,
    alarms_from_reading,
    bound_sensor,
    _reading_target,
    _status_target,
)


@dataclass(frozen=True)
class InitState:
    """Documented starting point for a trace run."""

    name: str
    levels: dict
    actuator_states: dict
    var_values: dict = field(default_factory=dict)
    integrators: dict = field(default_factory=dict)


@dataclass
class PhysicsState:
    levels: dict
    integrators: dict


def _flow_active(flow, states: dict) -> bool:
    return all(states[a] == s for a, s in flow.requires)


def step_physics(state: PhysicsState, actuator_states: dict, config: PlantConfig
                 ) -> PhysicsState:
    """One forward-Euler step of tank levels and integrator sensors."""
    deltas = {t.ident: 0.0 for t in config.tanks}
    for flow in config.flows:
        if not _flow_active(flow, actuator_states):
            continue
        if flow.source:
            deltas[flow.source] -= flow.rate
        if flow.sink:
            deltas[flow.sink] += flow.rate
    levels = {}
    for tank in config.tanks:
        lv = state.levels[tank.ident] + config.dt * deltas[tank.ident]
        levels[tank.ident] = min(max(lv, 0.0), tank.capacity)
    integrators = {}
    for sensor_id, src in config.sensor_sources.items():
        if not isinstance(src, IntegratorSource):
            continue
        v = state.integrators[sensor_id]
        if any(actuator_states[a] == s for a, s in src.rise_any):
            v += config.dt * src.rise_rate
        if any(actuator_states[a] == s for a, s in src.fall_any):
            v -= config.dt * src.fall_rate
        spec = config.sensor(sensor_id)
        integrators[sensor_id] = min(max(v, spec.range_min), spec.range_max)
    return PhysicsState(levels, integrators)


def _readings(state: PhysicsState, actuator_states: dict, config: PlantConfig,
              rng: np.random.Generator | None) -> dict:
    flows_by_id = {f.ident: f for f in config.flows}
    out = {}
    for spec in config.sensors:
        src = config.sensor_sources[spec.ident]
        if isinstance(src, LevelSource):
            r = state.levels[src.tank]
        elif isinstance(src, FlowSource):
            r = sum(flows_by_id[f].rate for f in src.flows
                    if _flow_active(flows_by_id[f], actuator_states))
        else:
            r = state.integrators[spec.ident]
        if config.noise.enabled and rng is not None:
            r += rng.uniform(-1.0, 1.0) * config.noise.rel_amplitude * spec.span
        out[spec.ident] = min(max(r, spec.range_min), spec.range_max)
    return out


def _alarm_bits(readings: dict, config: PlantConfig) -> dict:
    bits = {}
    for spec in config.sensors:
        vals = alarms_from_reading(readings[spec.ident], spec)
        for suffix, v in zip(ALARM_SUFFIXES, vals):
            bits[alarm_ident(spec.ident, suffix)] = v
    return bits


def _var_idents(programs: list[Program]) -> list[str]:
    idents: list[str] = []
    for prog in programs:
        dm = decl_map(prog)
        for ident in prog.input_order:
            if dm[ident].var_class in (VarClass.STATE_VAR, VarClass.TIMER,
                                       VarClass.HEALTHY_FLAG):
                idents.append(ident)
    return idents


class _Actuation:
    """Applies commanded states with per-kind transition delays."""

    def __init__(self, config: PlantConfig, initial: dict):
        self.config = config
        self.states = dict(initial)
        self.transitions: dict = {}  # valve -> [target, steps_left]

    def command(self, commands: dict) -> None:
        nxt = dict(self.states)
        for act in self.config.actuators:
            cmd = commands.get(act.ident)
            if act.kind == "pump":
                if cmd is not None:
                    nxt[act.ident] = cmd
                continue
            # valve
            tr = self.transitions.get(act.ident)
            target = cmd if cmd in (1, 2) else None  # 0/None: hold current motion
            if tr is not None and target is not None and target != tr[0]:
                tr = None  # re-target restarts the stroke
            if tr is None:
                if target is not None and target != self.states[act.ident]:
                    self.transitions[act.ident] = [target, self.config.valve_transition_steps]
                    nxt[act.ident] = VALVE_CHANGING
                # else: already at target (or no command): hold
            else:
                tr[1] -= 1
                if tr[1] <= 0:
                    nxt[act.ident] = tr[0]
                    del self.transitions[act.ident]
                else:
                    nxt[act.ident] = VALVE_CHANGING
        self.states = nxt


def generate_trace(programs: list[Program], config: PlantConfig, init: InitState,
                   duration: float, seed: int = 0) -> list[TraceRow]:
    """Closed-loop run of ``duration`` seconds; one TraceRow per dt."""
    if duration <= 0:
        raise ValueError("duration must be positive")
    n_steps = int(round(duration / config.dt))
    rng = np.random.default_rng(seed)

    phys = PhysicsState(
        levels=dict(init.levels),
        integrators={
            s: init.integrators.get(s, src.initial)
            for s, src in config.sensor_sources.items()
            if isinstance(src, IntegratorSource)
        },
    )
    actuation = _Actuation(config, init.actuator_states)

    store: dict = {}
    decl_maps = {p.name: decl_map(p) for p in programs}
    for prog in programs:
        dm = decl_maps[prog.name]
        for ident in prog.input_order:
            if dm[ident].var_class in (VarClass.STATE_VAR, VarClass.TIMER,
                                       VarClass.HEALTHY_FLAG):
                store[ident] = init.var_values.get(ident, dm[ident].initial)

    wiring = {p.name: config.wiring_for(p.name) for p in programs}
    rows: list[TraceRow] = []
    for step in range(n_steps):
        readings = _readings(phys, actuation.states, config, rng)
        alarms = _alarm_bits(readings, config)
        row = TraceRow(
            t=step * config.dt,
            readings=readings,
            alarms=alarms,
            states=dict(actuation.states),
            vars=dict(store),
        )
        rows.append(row)

        commands: dict = {}
        for prog in programs:
            dm = decl_maps[prog.name]
            snapshot = [row.input_value(i, dm[i].var_class, config)
                        for i in prog.input_order]
            res = scan_ex(prog, snapshot)
            for w in wiring[prog.name]:
                commands[w.actuator] = command_to_state(
                    res.finals[w.output], w.mode)
            for ident in prog.input_order:
                if dm[ident].var_class is VarClass.STATE_VAR:
                    store[ident] = res.finals[ident]
                elif dm[ident].var_class is VarClass.TIMER:
                    card = dm[ident].kind.card or 2
                    store[ident] = (store[ident] + 1) % card

        phys = step_physics(phys, actuation.states, config)
        actuation.command(commands)
    return rows


def command_to_state(value, mode: str):
    """Map a program output value to the commanded actuator state."""
    if mode == "bool-pump":
        return int(value)
    if mode == "bool-valve":
        return 2 if int(value) else 1
    return int(value)  # "state"


def input_matrix_from_trace(prog: Program, trace: list[TraceRow],
                            config: PlantConfig) -> np.ndarray:
    """Snapshot matrix (len(trace), |inputs|) for replaying a program."""
    dm = decl_map(prog)
    classes = [dm[i].var_class for i in prog.input_order]
    mat = np.empty((len(trace), len(prog.input_order)), dtype=np.float64)
    for r, row in enumerate(trace):
        for c, (ident, cls) in enumerate(zip(prog.input_order, classes)):
            mat[r, c] = row.input_value(ident, cls, config)
    return mat
