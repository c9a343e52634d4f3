"""Scan execution engine: compiled backend when available, pure Python otherwise.

Selection happens once at import.  Set ``PLCATTEST_PURE=1`` to force the
pure-Python executor (used by the benchmark and for differential tests
in environments without a compiler).

The latch-state argument is optional everywhere: when omitted, each SETD
block's previous ``Out`` bit is taken from the snapshot itself if the
``.Out`` sub-field is declared as an input-class variable, and from the
declared initial (0) otherwise.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .ast import Program, Value, decl_map, latch_out_ident
from .errors import EvalError
from .interp import coerce_value, init_store
from .ir import CompiledProgram, compile_program
from . import pyvm

if os.environ.get("PLCATTEST_PURE") == "1":
    _run_rows = pyvm.run_rows
    BACKEND_NAME = "pure"
else:
    try:
        from . import _corevm

        _run_rows = _corevm.run_rows
        BACKEND_NAME = "compiled"
    except ImportError:
        _run_rows = pyvm.run_rows
        BACKEND_NAME = "pure"


@dataclass(frozen=True)
class ScanResult:
    outputs: tuple[Value, ...]
    latches: dict[str, int]
    finals: dict[str, Value]


def _latch_matrix(cp: CompiledProgram, prog: Program, inputs: np.ndarray,
                  latches) -> np.ndarray:
    n = inputs.shape[0]
    m = len(prog.setd_blocks)
    out = np.empty((n, m), dtype=np.float64)
    if latches is None:
        for j, block in enumerate(prog.setd_blocks):
            pos = int(cp.latch_input_pos[j])
            if pos >= 0:
                out[:, j] = inputs[:, pos]
            else:
                out[:, j] = cp.init_vals[cp.latch_slots[j]]
    elif isinstance(latches, Mapping):
        for j, block in enumerate(prog.setd_blocks):
            out[:, j] = float(latches[block])
    else:
        lat = np.asarray(latches, dtype=np.float64)
        if lat.shape != (n, m):
            raise EvalError(f"latch matrix shape {lat.shape} != ({n}, {m})")
        out[:] = lat
    return out


def _execute(cp: CompiledProgram, vars_mat: np.ndarray) -> None:
    bad = _run_rows(cp.code, cp.consts, vars_mat)
    if bad >= 0:
        raise EvalError(f"ENUM value out of range during scan (row {bad})")


def batch_scan_full(prog: Program, inputs: np.ndarray, latches=None
                    ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Scan many snapshots at once.

    ``inputs`` is (n, |input_order|) float64; ``latches`` may be None, a
    single mapping applied to every row, or an (n, |setd_blocks|) matrix.
    Returns (outputs, latches_out, finals), where ``finals`` is the full
    (n, n_slots) slot matrix.
    """
    cp = compile_program(prog)
    inputs = np.ascontiguousarray(inputs, dtype=np.float64)
    if inputs.ndim != 2 or inputs.shape[1] != len(prog.input_order):
        raise EvalError(
            f"input matrix must be (n, {len(prog.input_order)}), got {inputs.shape}")
    n = inputs.shape[0]
    vars_mat = np.tile(cp.init_vals, (n, 1))
    vars_mat[:, cp.input_slots] = inputs
    if len(cp.latch_slots):
        vars_mat[:, cp.latch_slots] = _latch_matrix(cp, prog, inputs, latches)
    _execute(cp, vars_mat)
    outputs = vars_mat[:, cp.output_slots].copy() if len(cp.output_slots) else np.empty((n, 0))
    latches_out = vars_mat[:, cp.latch_slots].copy() if len(cp.latch_slots) else np.empty((n, 0))
    return outputs, latches_out, vars_mat


def batch_scan(prog: Program, inputs: np.ndarray, latches=None
               ) -> tuple[np.ndarray, np.ndarray]:
    outputs, latches_out, _ = batch_scan_full(prog, inputs, latches)
    return outputs, latches_out


def _outputs_tuple(prog: Program, cp: CompiledProgram, row: np.ndarray) -> tuple[Value, ...]:
    vals = row[cp.output_slots]
    return tuple(
        float(v) if is_real else int(v)
        for v, is_real in zip(vals, cp.output_is_real)
    )


def scan_ex(prog: Program, inputs: Sequence[Value],
            latches: Mapping[str, int] | None = None) -> ScanResult:
    """One validated scan cycle; also returns the full final store."""
    store = init_store(prog, inputs, latches)  # validates kinds and latch keys
    cp = compile_program(prog)
    row = np.empty((1, cp.n_slots), dtype=np.float64)
    for ident, slot in cp.slot_of.items():
        row[0, slot] = float(store[ident])
    _execute(cp, row)
    dm = decl_map(prog)
    finals = {}
    for ident, slot in cp.slot_of.items():
        v = row[0, slot]
        finals[ident] = float(v) if dm[ident].kind.base == "REAL" else int(v)
    outputs = tuple(finals[i] for i in prog.output_order)
    latches_out = {b: int(finals[latch_out_ident(b)]) for b in prog.setd_blocks}
    return ScanResult(outputs, latches_out, finals)


def scan(prog: Program, inputs: Sequence[Value],
         latches: Mapping[str, int] | None = None
         ) -> tuple[tuple[Value, ...], dict[str, int]]:
    """Execute one scan cycle: (input snapshot, latch state) -> (outputs, latch state)."""
    res = scan_ex(prog, inputs, latches)
    return res.outputs, res.latches


def snapshot_from_map(prog: Program, values: Mapping[str, Value],
                      default_from_initial: bool = True) -> list[Value]:
    """Build an ordered input snapshot from an ident->value mapping."""
    dm = decl_map(prog)
    snap = []
    for ident in prog.input_order:
        if ident in values:
            snap.append(coerce_value(values[ident], dm[ident].kind))
        elif default_from_initial:
            snap.append(dm[ident].initial)
        else:
            raise KeyError(ident)
    return snap
