"""Training-data construction: label codec, input sampling, collection.

The label packs every actuator's commanded state into one integer,
MSB-first in layout order (pumps before valves).  Valves use two bits
(closed=10, open=01, changing=11; 00 is invalid), pumps one (on=1).
With the stage-1 layout [P101, P102, MV101], "P101 on, P102 on, MV101
closed" encodes to 0b1110 = 14.

Input sampling is uniform per input kind with no heuristic biasing;
alarm quadruples are drawn only from the 9 monotonically consistent
(H, HH, L, LL) combinations (HH implies H, LL implies L).
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .stlang import Program, VarClass, batch_scan
from .stlang.ast import REAL, decl_map

#: (H, HH) and (L, LL) sides of the 9 consistent alarm combinations.
_HI_SIDE = ((0, 0), (1, 0), (1, 1))
_LO_SIDE = ((0, 0), (1, 0), (1, 1))
_SUFFIX_TO_PART = {"AH": 0, "AHH": 1, "AL": 2, "ALL": 3}


class InvalidStateError(ValueError):
    """Actuator value with no defined bit pattern (or vice versa)."""


@dataclass(frozen=True)
class CodecEntry:
    actuator: str
    source_output: str  # program output ident driving this actuator
    width: int
    command_to_state: dict  # program output value -> actuator state
    state_to_bits: dict     # actuator state -> bit pattern
    bits_to_state: dict     # bit pattern -> actuator state


@dataclass(frozen=True)
class LabelCodec:
    entries: tuple[CodecEntry, ...]
    output_order: tuple[str, ...]  # the owning program's output order

    @property
    def width(self) -> int:
        return sum(e.width for e in self.entries)

    def shifts(self) -> list[int]:
        shifts, pos = [], self.width
        for e in self.entries:
            pos -= e.width
            shifts.append(pos)
        return shifts


def pump_entry(actuator: str, source_output: str) -> CodecEntry:
    return CodecEntry(actuator, source_output, 1,
                      {0: 0, 1: 1}, {0: 0b0, 1: 0b1}, {0b0: 0, 0b1: 1})


def valve_entry(actuator: str, source_output: str, command_mode: str) -> CodecEntry:
    state_to_bits = {1: 0b10, 2: 0b01, 0: 0b11}
    bits_to_state = {0b10: 1, 0b01: 2, 0b11: 0}
    if command_mode == "bool-valve":
        cmd_to_state = {0: 1, 1: 2}
    else:  # "state": the command value is the target state
        cmd_to_state = {0: 0, 1: 1, 2: 2}
    return CodecEntry(actuator, source_output, 2, cmd_to_state, state_to_bits, bits_to_state)


def encode_states(states: Mapping[str, int], codec: LabelCodec) -> int:
    """Pack actuator states (not raw commands) into a label."""
    label = 0
    for entry, shift in zip(codec.entries, codec.shifts()):
        st = states[entry.actuator]
        if st not in entry.state_to_bits:
            raise InvalidStateError(f"{entry.actuator}: no encoding for state {st}")
        label |= entry.state_to_bits[st] << shift
    return label


def encode_label(out: Sequence, codec: LabelCodec) -> int:
    """Encode one OutputSnapshot (aligned with the program's output order)."""
    values = dict(zip(codec.output_order, out))
    states = {}
    for entry in codec.entries:
        v = int(values[entry.source_output])
        if v not in entry.command_to_state:
            raise InvalidStateError(f"{entry.actuator}: undefined command value {v}")
        states[entry.actuator] = entry.command_to_state[v]
    return encode_states(states, codec)


def decode_label(label: int, codec: LabelCodec) -> dict:
    """Unpack a label into per-actuator states."""
    states = {}
    for entry, shift in zip(codec.entries, codec.shifts()):
        bits = (label >> shift) & ((1 << entry.width) - 1)
        if bits not in entry.bits_to_state:
            raise InvalidStateError(f"{entry.actuator}: invalid bit pattern {bits:0{entry.width}b}")
        states[entry.actuator] = entry.bits_to_state[bits]
    return states


def valid_labels(codec: LabelCodec) -> list[int]:
    """All labels whose every field decodes to a valid actuator state."""
    labels = [0]
    for entry, shift in zip(codec.entries, codec.shifts()):
        labels = [l | (bits << shift) for l in labels for bits in entry.bits_to_state]
    return sorted(labels)


def encode_label_matrix(outputs: np.ndarray, codec: LabelCodec) -> np.ndarray:
    """Vectorised encode_label over an output matrix."""
    labels = np.zeros(outputs.shape[0], dtype=np.int64)
    col_of = {ident: i for i, ident in enumerate(codec.output_order)}
    for entry, shift in zip(codec.entries, codec.shifts()):
        vals = outputs[:, col_of[entry.source_output]].astype(np.int64)
        max_cmd = max(entry.command_to_state)
        lut = np.full(max_cmd + 1, -1, dtype=np.int64)
        for cmd, state in entry.command_to_state.items():
            lut[cmd] = entry.state_to_bits[state]
        if vals.min() < 0 or vals.max() > max_cmd or (lut[vals] < 0).any():
            raise InvalidStateError(f"{entry.actuator}: undefined command value in batch")
        labels |= lut[vals] << shift
    return labels


# --- input sampling ----------------------------------------------------------

def _alarm_groups(prog: Program) -> dict:
    """Group alarm-bit input positions by sensor: base -> {part: column}."""
    dm = decl_map(prog)
    groups: dict[str, dict[int, int]] = {}
    for col, ident in enumerate(prog.input_order):
        if dm[ident].var_class is not VarClass.ALARM_BIT:
            continue
        base, _, suffix = ident.rpartition(".")
        if suffix in _SUFFIX_TO_PART:
            groups.setdefault(base, {})[_SUFFIX_TO_PART[suffix]] = col
        else:
            groups.setdefault(ident, {})[0] = col  # unconventional name: lone bit
    return groups


def random_input_matrix(prog: Program, n: int, rng: np.random.Generator,
                        real_ranges: Mapping[str, tuple[float, float]] | None = None,
                        ) -> np.ndarray:
    """n uniform snapshots; alarm quadruples stay monotonically consistent."""
    dm = decl_map(prog)
    mat = np.empty((n, len(prog.input_order)), dtype=np.float64)
    alarm_cols = set()
    groups = _alarm_groups(prog)
    for cols in groups.values():
        alarm_cols.update(cols.values())
        hi = rng.integers(0, 3, size=n)
        lo = rng.integers(0, 3, size=n)
        parts = [
            np.asarray([s[0] for s in _HI_SIDE])[hi],
            np.asarray([s[1] for s in _HI_SIDE])[hi],
            np.asarray([s[0] for s in _LO_SIDE])[lo],
            np.asarray([s[1] for s in _LO_SIDE])[lo],
        ]
        for part, col in cols.items():
            mat[:, col] = parts[part]
    for col, ident in enumerate(prog.input_order):
        if col in alarm_cols:
            continue
        kind = dm[ident].kind
        if kind.base == "BOOL":
            mat[:, col] = rng.integers(0, 2, size=n)
        elif kind.base == "ENUM":
            mat[:, col] = rng.integers(0, kind.card, size=n)
        else:
            lo_r, hi_r = (real_ranges or {}).get(ident, (0.0, 1.0))
            mat[:, col] = rng.uniform(lo_r, hi_r, size=n)
    return mat


def random_inputs(input_decls, rng: np.random.Generator,
                  real_ranges: Mapping[str, tuple[float, float]] | None = None) -> list:
    """One uniform snapshot for the given ``list_inputs``-style metadata."""
    from .stlang.ast import build_program, VarDecl

    decls = tuple(VarDecl(i, c, k, 0.0 if k == REAL else 0) for i, c, k in input_decls)
    pseudo = build_program("_sampling", decls, ())
    row = random_input_matrix(pseudo, 1, rng, real_ranges)[0]
    return [float(v) if d.kind == REAL else int(v) for v, d in zip(row, decls)]


# --- datasets ----------------------------------------------------------------

_GROUP_RANK = {
    VarClass.ALARM_BIT: 0,
    VarClass.SENSOR_READING: 1,
    VarClass.ACTUATOR_STATE: 2,
}


def feature_order(prog: Program, important: Sequence[str]) -> tuple[str, ...]:
    """Fixed feature order: alarms, then readings, then actuator states,
    then remaining variables; declaration order within each group."""
    dm = decl_map(prog)
    idx = {ident: i for i, ident in enumerate(prog.input_order)}
    missing = [i for i in important if i not in idx]
    if missing:
        raise ValueError(f"not program inputs: {missing}")
    return tuple(sorted(important,
                        key=lambda i: (_GROUP_RANK.get(dm[i].var_class, 3), idx[i])))


@dataclass(frozen=True)
class Dataset:
    """Feature matrix + encoded labels, with the spec needed to rebuild rows."""

    X: np.ndarray            # (n, k) float64
    y: np.ndarray            # (n,) int64
    input_spec: tuple[str, ...]
    codec: LabelCodec
    seed: int
    program: str = ""

    def __len__(self) -> int:
        return len(self.y)


def collect(prog: Program, important: Sequence[str], n: int, codec: LabelCodec,
            seed: int = 0,
            real_ranges: Mapping[str, tuple[float, float]] | None = None) -> Dataset:
    """Alg-style data collection: n random snapshots -> scan -> labelled rows.

    Latch state for each sample comes from the snapshot's own ``.Out``
    fields (fresh per sample, no carry-over between samples).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    spec = feature_order(prog, important)
    X_full = random_input_matrix(prog, n, rng, real_ranges)
    outputs, _ = batch_scan(prog, X_full)
    y = encode_label_matrix(outputs, codec)
    cols = [prog.input_order.index(i) for i in spec]
    return Dataset(np.ascontiguousarray(X_full[:, cols]), y, spec, codec, seed, prog.name)


def oversample(ds: Dataset, row: tuple[Sequence[float], int], copies: int) -> Dataset:
    """Append ``copies`` identical rows (the RQ2-style retraining fix)."""
    fv, label = row
    fv = np.asarray(fv, dtype=np.float64)
    if fv.shape != (ds.X.shape[1],):
        raise ValueError(f"feature arity {fv.shape} != {(ds.X.shape[1],)}")
    if copies == 0:
        return ds
    X = np.vstack([ds.X, np.tile(fv, (copies, 1))])
    y = np.concatenate([ds.y, np.full(copies, label, dtype=np.int64)])
    return replace(ds, X=X, y=y)


# --- persistence -------------------------------------------------------------

def _codec_to_json(codec: LabelCodec) -> dict:
    return {
        "output_order": list(codec.output_order),
        "entries": [
            {
                "actuator": e.actuator,
                "source_output": e.source_output,
                "width": e.width,
                "command_to_state": {str(k): v for k, v in e.command_to_state.items()},
                "state_to_bits": {str(k): v for k, v in e.state_to_bits.items()},
            }
            for e in codec.entries
        ],
    }


def _codec_from_json(data: dict) -> LabelCodec:
    entries = []
    for e in data["entries"]:
        state_to_bits = {int(k): v for k, v in e["state_to_bits"].items()}
        entries.append(CodecEntry(
            actuator=e["actuator"],
            source_output=e["source_output"],
            width=e["width"],
            command_to_state={int(k): v for k, v in e["command_to_state"].items()},
            state_to_bits=state_to_bits,
            bits_to_state={v: k for k, v in state_to_bits.items()},
        ))
    return LabelCodec(tuple(entries), tuple(data["output_order"]))


def save_dataset(ds: Dataset, path: str | Path) -> None:
    """CSV (f0..f{k-1},label) plus a .meta.json sidecar."""
    path = Path(path)
    k = ds.X.shape[1]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow([f"f{i}" for i in range(k)] + ["label"])
        for fv, label in zip(ds.X, ds.y):
            w.writerow([
                (str(int(v)) if v.is_integer() else f"{v:.6f}") for v in fv
            ] + [str(int(label))])
    meta = {
        "format": "plcattest-dataset",
        "version": 1,
        "program": ds.program,
        "input_spec": list(ds.input_spec),
        "seed": ds.seed,
        "codec": _codec_to_json(ds.codec),
    }
    sidecar_path(path).write_text(json.dumps(meta, indent=2) + "\n")


def sidecar_path(path: str | Path) -> Path:
    path = Path(path)
    return path.with_suffix(path.suffix + ".meta.json")


def load_dataset(path: str | Path) -> Dataset:
    path = Path(path)
    meta = json.loads(sidecar_path(path).read_text())
    rows, labels = [], []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        next(reader)
        for rec in reader:
            rows.append([float(v) for v in rec[:-1]])
            labels.append(int(rec[-1]))
    return Dataset(
        X=np.asarray(rows, dtype=np.float64),
        y=np.asarray(labels, dtype=np.int64),
        input_spec=tuple(meta["input_spec"]),
        codec=_codec_from_json(meta["codec"]),
        seed=meta["seed"],
        program=meta.get("program", ""),
    )
