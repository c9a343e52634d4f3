"""Built-in mini-plant: control programs, toy physics, trace generation."""

from .configio import load_plant_config, parse_plant_config
from .miniplant import (
    builtin_miniplant,
    codec_for_program,
    miniplant_codecs,
    miniplant_initial_states,
)
from .physics import (
    InitState,
    PhysicsState,
    command_to_state,
    generate_trace,
    input_matrix_from_trace,
    step_physics,
)
from .specs import (
    ALARM_SUFFIXES,
    ActuatorSpec,
    FlowSpec,
    NoiseSpec,
    PlantConfig,
    SensorSpec,
    TankSpec,
    TraceRow,
    WiringEntry,
    alarm_ident,
    alarms_from_reading,
    bound_sensor,
    status_ident,
    validate_bindings,
)
from .traceio import load_trace, save_trace, trace_columns

__all__ = [
    "ALARM_SUFFIXES",
    "ActuatorSpec",
    "FlowSpec",
    "InitState",
    "NoiseSpec",
    "PhysicsState",
    "PlantConfig",
    "SensorSpec",
    "TankSpec",
    "TraceRow",
    "WiringEntry",
    "alarm_ident",
    "alarms_from_reading",
    "bound_sensor",
    "builtin_miniplant",
    "codec_for_program",
    "command_to_state",
    "generate_trace",
    "input_matrix_from_trace",
    "load_plant_config",
    "load_trace",
    "miniplant_codecs",
    "miniplant_initial_states",
    "parse_plant_config",
    "save_trace",
    "status_ident",
    "step_physics",
    "trace_columns",
    "validate_bindings",
]
