"""The built-in three-stage mini-plant.

Stage 1 is the raw-water intake (inlet valve MV101, duty/standby pumps
P101/P102 driven by tank level alarms); stage 2 doses chemicals over the
transfer line and owns the outlet valve MV201; stage 3 runs the
ultrafiltration feed pumps and the differential-pressure backwash valve.
Stage 1's valve/pump logic follows the classic raw-water inlet control
pattern exactly; stages 2-3 are structural analogs exercising the same
dialect constructs (latches, IF/ELSE, CASE, cross-stage reads).
"""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

from ..dataset import LabelCodec, pump_entry, valve_entry
from ..stlang import Program, parse_program
from .configio import parse_plant_config
from .physics import InitState
from .specs import PlantConfig, validate_bindings

try:
    import tomllib
except ImportError:  # Python < 3.11
    import tomli as tomllib


def _data_text(name: str) -> str:
    return resources.files("plcattest.plantmodel").joinpath("data", name).read_text()


@lru_cache(maxsize=1)
def builtin_miniplant() -> tuple[list[Program], PlantConfig]:
    """Parse the shipped programs and plant description (cached)."""
    config = parse_plant_config(tomllib.loads(_data_text("miniplant.toml")))
    programs = [parse_program(_data_text(f)) for f in config.program_files]
    validate_bindings(programs, config)
    return programs, config


def codec_for_program(prog: Program, config: PlantConfig) -> LabelCodec:
    """Label layout for one program: its pumps first, then its valves."""
    wiring = config.wiring_for(prog.name)
    entries = []
    for w in wiring:
        if config.actuator(w.actuator).kind == "pump":
            entries.append(pump_entry(w.actuator, w.output))
    for w in wiring:
        if config.actuator(w.actuator).kind == "valve":
            entries.append(valve_entry(w.actuator, w.output, w.mode))
    return LabelCodec(tuple(entries), prog.output_order)


def miniplant_initial_states() -> dict[str, InitState]:
    """Documented trace starting points; together they cover every
    actuator state value at least once (asserted by a test)."""
    base_states = {"MV101": 1, "MV201": 1, "MV301": 1,
                   "P101": 0, "P102": 0, "P201": 0, "P203": 0, "P301": 0, "P302": 0}
    return {
        "baseline": InitState(
            name="baseline",
            levels={"T101": 400.0, "T301": 240.0},
            actuator_states=dict(base_states),
            integrators={"DPIT301": 0.6},
        ),
        "maintenance": InitState(
            name="maintenance",
            levels={"T101": 420.0, "T301": 300.0},
            actuator_states=dict(base_states),
            var_values={"HMI_P1_FAULT": 1, "HMI_UF_FAULT": 1},
            integrators={"DPIT301": 0.6},
        ),
        "dosing-off": InitState(
            name="dosing-off",
            levels={"T101": 500.0, "T301": 260.0},
            actuator_states=dict(base_states),
            var_values={"HMI_P2_DOSING_ENABLED": 0, "HMI_P2_MODE": 0},
            integrators={"DPIT301": 0.6},
        ),
        "manual-dosing": InitState(
            name="manual-dosing",
            levels={"T101": 600.0, "T301": 500.0},
            actuator_states=dict(base_states),
            var_values={"HMI_P2_MODE": 2},
            integrators={"DPIT301": 0.6},
        ),
        "high-start": InitState(
            name="high-start",
            levels={"T101": 900.0, "T301": 820.0},
            actuator_states=dict(base_states),
            integrators={"DPIT301": 5.8},
        ),
    }


def miniplant_codecs() -> dict[str, LabelCodec]:
    programs, config = builtin_miniplant()
    return {p.name: codec_for_program(p, config) for p in programs}
