"""Plant configuration file loader (TOML; see docs/formats.md)."""

from __future__ import annotations

try:
    import tomllib
except ImportError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path

from .specs import (
    ActuatorSpec,
    COMMAND_MODES,
    FlowSource,
    FlowSpec,
    IntegratorSource,
    LevelSource,
    NoiseSpec,
    PlantConfig,
    SensorSpec,
    TankSpec,
    WiringEntry,
)


def _atoms(raw) -> tuple[tuple[str, int], ...]:
    return tuple((str(a), int(s)) for a, s in raw)


def _sensor_source(raw: dict):
    kind = raw["kind"]
    if kind == "level":
        return LevelSource(raw["tank"])
    if kind == "flow":
        return FlowSource(tuple(raw["flows"]))
    if kind == "integrator":
        return IntegratorSource(
            rise_rate=float(raw["rise_rate"]),
            rise_any=_atoms(raw["rise_any"]),
            fall_rate=float(raw["fall_rate"]),
            fall_any=_atoms(raw["fall_any"]),
            initial=float(raw.get("initial", 0.0)),
        )
    raise ValueError(f"unknown sensor source kind {kind!r}")


def parse_plant_config(data: dict) -> PlantConfig:
    sensors = []
    sources = {}
    for raw in data["sensors"]:
        thr = raw["thresholds"]
        sensors.append(SensorSpec(
            ident=raw["ident"], unit=raw.get("unit", ""),
            range_min=float(raw["range"][0]), range_max=float(raw["range"][1]),
            ll=float(thr["LL"]), l=float(thr["L"]), h=float(thr["H"]), hh=float(thr["HH"]),
        ))
        sources[raw["ident"]] = _sensor_source(raw["source"])
    wiring = []
    for raw in data["wiring"]:
        if raw["mode"] not in COMMAND_MODES:
            raise ValueError(f"unknown command mode {raw['mode']!r}")
        wiring.append(WiringEntry(raw["program"], raw["output"], raw["actuator"], raw["mode"]))
    noise = data.get("noise", {})
    return PlantConfig(
        dt=float(data["dt"]),
        valve_transition_steps=int(data["valve_transition_steps"]),
        tanks=tuple(TankSpec(t["ident"], float(t["capacity"])) for t in data["tanks"]),
        sensors=tuple(sensors),
        sensor_sources=sources,
        actuators=tuple(ActuatorSpec(a["ident"], a["kind"], int(a["cardinality"]))
                        for a in data["actuators"]),
        flows=tuple(FlowSpec(f["ident"], f.get("source", ""), f.get("sink", ""),
                             float(f["rate"]), _atoms(f["requires"]))
                    for f in data["flows"]),
        wiring=tuple(wiring),
        program_files=tuple(data.get("programs", ())),
        noise=NoiseSpec(bool(noise.get("enabled", False)),
                        float(noise.get("rel_amplitude", 0.0))),
    )


def load_plant_config(path: str | Path) -> PlantConfig:
    with open(path, "rb") as fh:
        return parse_plant_config(tomllib.load(fh))
