"""Tree-walking reference interpreter for one scan cycle.

This is the slow, readable semantics.  Production paths go through
:mod:`plcattest.stlang.engine` (bytecode VM); differential tests assert
that both agree on arbitrary programs and inputs.

Scan semantics: the variable store starts from declared initial values,
input slots are overwritten by the snapshot, latch ``Out`` slots by the
explicit latch map (when given), then the body runs top to bottom once.
SETD is set-dominant: with EnableIn=0 the Out bit holds its previous
value; otherwise Set=1 forces 1, else Reset=1 forces 0, else hold.
"""

from __future__ import annotations

import math
from typing import Mapping, Sequence

from .ast import (
    Assign,
    BinOp,
    BOOL,
    Case,
    Expr,
    If,
    IntLit,
    Not,
    Program,
    REAL,
    RealLit,
    SetD,
    Stmt,
    Value,
    VarRef,
    decl_map,
    latch_out_ident,
)
from .errors import EvalError, StlangError


def coerce_value(v: Value, kind) -> Value:
    """Validate and normalise one runtime value against its declared kind."""
    if kind == REAL:
        f = float(v)
        if not math.isfinite(f):
            raise EvalError(f"non-finite REAL value {v!r}")
        return f
    if isinstance(v, float):
        if not v.is_integer():
            raise EvalError(f"non-integral value {v!r} for {kind}")
        v = int(v)
    iv = int(v)
    if kind == BOOL:
        if iv not in (0, 1):
            raise EvalError(f"BOOL value must be 0 or 1, got {iv}")
    elif not 0 <= iv < kind.card:
        raise EvalError(f"ENUM({kind.card}) value out of range: {iv}")
    return iv


def init_store(prog: Program, inputs: Sequence[Value],
               latches: Mapping[str, int] | None) -> dict[str, Value]:
    dm = decl_map(prog)
    if len(inputs) != len(prog.input_order):
        raise StlangError(
            f"snapshot has {len(inputs)} values, program expects {len(prog.input_order)}")
    store: dict[str, Value] = {d.ident: d.initial for d in prog.decls}
    for ident, v in zip(prog.input_order, inputs):
        store[ident] = coerce_value(v, dm[ident].kind)
    if latches is not None:
        for block in prog.setd_blocks:
            store[latch_out_ident(block)] = coerce_value(latches[block], BOOL)
    return store


def _eval(e: Expr, store: dict[str, Value]) -> Value:
    if isinstance(e, (IntLit, RealLit)):
        return e.value
    if isinstance(e, VarRef):
        return store[e.ident]
    if isinstance(e, Not):
        return 0 if _eval(e.operand, store) else 1
    op = e.op
    a = _eval(e.left, store)
    if op == "AND":
        return 1 if (a and _eval(e.right, store)) else 0
    if op == "OR":
        return 1 if (a or _eval(e.right, store)) else 0
    b = _eval(e.right, store)
    if op == "=":
        return 1 if a == b else 0
    if op == "<>":
        return 1 if a != b else 0
    if op == "<":
        return 1 if a < b else 0
    if op == "<=":
        return 1 if a <= b else 0
    if op == ">":
        return 1 if a > b else 0
    if op == ">=":
        return 1 if a >= b else 0
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    return a * b


def _exec(stmts: tuple[Stmt, ...], store: dict[str, Value], dm) -> None:
    for s in stmts:
        if isinstance(s, Assign):
            store[s.target] = coerce_value(_eval(s.rhs, store), dm[s.target].kind)
        elif isinstance(s, If):
            if _eval(s.cond, store):
                _exec(s.then, store, dm)
            else:
                _exec(s.orelse, store, dm)
        elif isinstance(s, SetD):
            if store[s.block + ".EnableIn"]:
                if store[s.block + ".Set"]:
                    store[s.block + ".Out"] = 1
                elif store[s.block + ".Reset"]:
                    store[s.block + ".Out"] = 0
        else:  # Case
            sel = store[s.selector]
            for value, arm in s.arms:
                if value == sel:
                    _exec(arm, store, dm)
                    break


def scan_reference(prog: Program, inputs: Sequence[Value],
                   latches: Mapping[str, int] | None = None,
                   ) -> tuple[tuple[Value, ...], dict[str, int], dict[str, Value]]:
    """One scan cycle; returns (outputs, latch map, full final store)."""
    store = init_store(prog, inputs, latches)
    _exec(prog.body, store, decl_map(prog))
    outputs = tuple(store[i] for i in prog.output_order)
    latches_out = {b: int(store[latch_out_ident(b)]) for b in prog.setd_blocks}
    return outputs, latches_out, store
