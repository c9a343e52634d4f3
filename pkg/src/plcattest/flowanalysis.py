"""Dynamic input-importance scoring.

Each iteration draws one row from a normal seed trace, computes the
baseline encoded output label, then mutates a random subset of input
positions independently (each from the same baseline vector, never
cumulatively) and counts a point for every position whose mutation
changed the label.  Latch state is rebuilt from the row itself for every
scan, so mutations stay independent of each other and of trace order.

Inputs that can never influence an actuator command (dead inputs, scan
counters, health bits) therefore score zero, and are dropped by the
"nonzero" selection policy.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .dataset import LabelCodec, encode_label_matrix
from .plantmodel import PlantConfig, TraceRow, input_matrix_from_trace
from .stlang import Program, batch_scan
from .stlang.ast import decl_map


class EmptyTraceError(ValueError):
    pass


@dataclass(frozen=True)
class ImportanceScores:
    """Per-input label-change counts; insertion order is declaration order."""

    scores: dict
    trials: int


def _mutate_columns(X: np.ndarray, cols: np.ndarray, prog: Program,
                    rng: np.random.Generator,
                    real_ranges: Mapping[str, tuple[float, float]] | None,
                    observed: np.ndarray) -> None:
    """In-place: X[i, cols[i]] becomes a fresh random value != the old one."""
    dm = decl_map(prog)
    kinds = [dm[i].kind for i in prog.input_order]
    for i in range(len(X)):
        c = cols[i]
        kind = kinds[c]
        old = X[i, c]
        if kind.base == "BOOL":
            X[i, c] = 1.0 - old
        elif kind.base == "ENUM":
            X[i, c] = (old + rng.integers(1, kind.card)) % kind.card
        else:
            ident = prog.input_order[c]
            if real_ranges and ident in real_ranges:
                lo, hi = real_ranges[ident]
            else:
                lo, hi = float(observed[:, c].min()), float(observed[:, c].max())
            new = rng.uniform(lo, hi)
            if new == old:
                new = lo if old != lo else hi
            X[i, c] = new


def score_inputs(prog: Program, seed_trace: Sequence[TraceRow], iterations: int,
                 subset_size: int, codec: LabelCodec, config: PlantConfig,
                 seed: int = 0,
                 real_ranges: Mapping[str, tuple[float, float]] | None = None,
                 ) -> ImportanceScores:
    """Run the mutation-scoring loop for ``iterations`` rounds."""
    if not len(seed_trace):
        raise EmptyTraceError("seed trace is empty")
    n = len(prog.input_order)
    if not 1 <= subset_size <= n:
        raise ValueError(f"subset_size must be in [1, {n}]")

    rows = input_matrix_from_trace(prog, list(seed_trace), config)
    base_out, _ = batch_scan(prog, rows)
    base_labels = encode_label_matrix(base_out, codec)

    # Per-iteration child seeds: scores are a sum over iterations, so any
    # worker split would merge to the same result.
    children = np.random.SeedSequence(seed).spawn(iterations)
    row_idx = np.empty(iterations, dtype=np.int64)
    mut_cols = np.empty((iterations, subset_size), dtype=np.int64)
    X = np.empty((iterations * subset_size, n), dtype=np.float64)
    for i, child in enumerate(children):
        rng = np.random.default_rng(child)
        r = int(rng.integers(0, len(rows)))
        row_idx[i] = r
        ks = rng.choice(n, size=subset_size, replace=False)
        mut_cols[i] = ks
        block = X[i * subset_size : (i + 1) * subset_size]
        block[:] = rows[r]
        _mutate_columns(block, ks, prog, rng, real_ranges, rows)

    out, _ = batch_scan(prog, X)
    labels = encode_label_matrix(out, codec)
    changed = labels != np.repeat(base_labels[row_idx], subset_size)

    counts = np.zeros(n, dtype=np.int64)
    np.add.at(counts, mut_cols.ravel()[changed], 1)
    scores = {ident: int(counts[c]) for c, ident in enumerate(prog.input_order)}
    return ImportanceScores(scores, iterations)


def select_important(scores: ImportanceScores, policy: str = "nonzero",
                     m: int | None = None) -> list[str]:
    """Pick inputs by policy; output keeps declaration order."""
    idents = list(scores.scores)
    if policy == "nonzero":
        return [i for i in idents if scores.scores[i] > 0]
    if policy == "top-m":
        if m is None or not 0 <= m <= len(idents):
            raise ValueError("top-m policy needs m <= number of inputs")
        ranked = sorted(range(len(idents)),
                        key=lambda k: (-scores.scores[idents[k]], k))
        chosen = sorted(ranked[:m])
        return [idents[k] for k in chosen]
    raise ValueError(f"unknown policy {policy!r}")


def save_scores(scores: ImportanceScores, path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["ident", "score", "trials"])
        for ident, score in scores.scores.items():
            w.writerow([ident, score, scores.trials])


def load_scores(path: str | Path) -> ImportanceScores:
    scores: dict = {}
    trials = 0
    with open(path, newline="") as fh:
        for rec in csv.DictReader(fh):
            scores[rec["ident"]] = int(rec["score"])
            trials = int(rec["trials"])
    return ImportanceScores(scores, trials)
