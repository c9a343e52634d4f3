"""Historian trace CSV I/O.

Header layout is ``t,<sensor idents>,<alarm idents>,<actuator idents>,
<var idents>``: sensors in config order, four alarm columns per sensor
(AH, AHH, AL, ALL), actuators in config order, then the union of the
programs' state/timer/healthy-flag inputs.  Reals carry six decimals,
bools are 0/1, enums plain integers.
"""

from __future__ import annotations

import csv
from pathlib import Path

from ..stlang import Program, VarClass
from ..stlang.ast import REAL, decl_map
from .physics import _var_idents
from .specs import ALARM_SUFFIXES, PlantConfig, TraceRow, alarm_ident


def trace_columns(config: PlantConfig, programs: list[Program]
                  ) -> tuple[list[str], list[str], list[str], list[str]]:
    sensors = [s.ident for s in config.sensors]
    alarms = [alarm_ident(s, suf) for s in sensors for suf in ALARM_SUFFIXES]
    actuators = [a.ident for a in config.actuators]
    var_cols = _var_idents(programs)
    return sensors, alarms, actuators, var_cols


def _var_kinds(programs: list[Program]) -> dict:
    kinds = {}
    for prog in programs:
        dm = decl_map(prog)
        for ident in prog.input_order:
            kinds[ident] = dm[ident].kind
    return kinds


def save_trace(path: str | Path, trace: list[TraceRow], config: PlantConfig,
               programs: list[Program]) -> None:
    sensors, alarms, actuators, var_cols = trace_columns(config, programs)
    kinds = _var_kinds(programs)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t"] + sensors + alarms + actuators + var_cols)
        for row in trace:
            rec = [f"{row.t:.6f}"]
            rec += [f"{row.readings[s]:.6f}" for s in sensors]
            rec += [str(row.alarms[a]) for a in alarms]
            rec += [str(row.states[a]) for a in actuators]
            for v in var_cols:
                val = row.vars[v]
                rec.append(f"{val:.6f}" if kinds[v] == REAL else str(int(val)))
            w.writerow(rec)


def load_trace(path: str | Path, config: PlantConfig,
               programs: list[Program]) -> list[TraceRow]:
    sensors, alarms, actuators, var_cols = trace_columns(config, programs)
    kinds = _var_kinds(programs)
    rows: list[TraceRow] = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        for rec in reader:
            rows.append(TraceRow(
                t=float(rec["t"]),
                readings={s: float(rec[s]) for s in sensors},
                alarms={a: int(rec[a]) for a in alarms},
                states={a: int(rec[a]) for a in actuators},
                vars={v: (float(rec[v]) if kinds[v] == REAL else int(rec[v]))
                      for v in var_cols},
            ))
    return rows
