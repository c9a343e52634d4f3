"""Flattens a type-checked Program into a compact bytecode form.

The VM is a small stack machine over one float64 slot per declared
variable (BOOL/ENUM values are whole numbers, exact in float64).  The
same instruction stream is executed either by the compiled extension
(``_corevm``) or the pure-Python executor (``pyvm``); both mutate a
row-major slot matrix in place, one row per scan.

Instruction layout: int32 rows ``[op, a, b, c, d]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .ast import (
    Assign,
    BinOp,
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
    VarRef,
    latch_out_ident,
)

OP_PUSH_C = 0   # push consts[a]
OP_PUSH_V = 1   # push vars[a]
OP_STORE = 2    # vars[a] = pop()                 (BOOL/REAL target)
OP_STORE_E = 3  # vars[a] = pop(), range check b  (ENUM target)
OP_NOT = 4
OP_AND = 5
OP_OR = 6
OP_EQ = 7
OP_NE = 8
OP_LT = 9
OP_LE = 10
OP_GT = 11
OP_GE = 12
OP_ADD = 13
OP_SUB = 14
OP_MUL = 15
OP_SETD = 16    # a=EnableIn b=Set c=Reset d=Out slots
OP_JMP = 17     # pc = a
OP_JZ = 18      # if pop() == 0: pc = a
OP_CASE_NE = 19  # if vars[a] != consts[b]: pc = c
OP_HALT = 20

_BINOP_CODE = {
    "AND": OP_AND, "OR": OP_OR, "=": OP_EQ, "<>": OP_NE, "<": OP_LT,
    "<=": OP_LE, ">": OP_GT, ">=": OP_GE, "+": OP_ADD, "-": OP_SUB, "*": OP_MUL,
}


@dataclass(frozen=True)
class CompiledProgram:
    code: np.ndarray          # (n, 5) int32
    consts: np.ndarray        # (k,) float64
    n_slots: int
    slot_of: dict
    init_vals: np.ndarray     # (n_slots,) float64
    input_slots: np.ndarray   # int32
    output_slots: np.ndarray  # int32
    output_is_real: np.ndarray
    latch_slots: np.ndarray   # int32, aligned with Program.setd_blocks
    latch_input_pos: np.ndarray  # index into the input vector, -1 if not an input
    max_stack: int


class _Emitter:
    def __init__(self, slot_of: dict[str, int], enum_cards: dict[str, int]):
        self.slot_of = slot_of
        self.enum_cards = enum_cards
        self.code: list[list[int]] = []
        self.consts: list[float] = []
        self._const_idx: dict[float, int] = {}
        self.max_stack = 0
        self._depth = 0

    def emit(self, op: int, a: int = 0, b: int = 0, c: int = 0, d: int = 0) -> int:
        self.code.append([op, a, b, c, d])
        return len(self.code) - 1

    def const(self, v: float) -> int:
        v = float(v)
        idx = self._const_idx.get(v)
        if idx is None:
            idx = len(self.consts)
            self.consts.append(v)
            self._const_idx[v] = idx
        return idx

    def _push(self) -> None:
        self._depth += 1
        self.max_stack = max(self.max_stack, self._depth)

    def expr(self, e: Expr) -> None:
        if isinstance(e, (IntLit, RealLit)):
            self.emit(OP_PUSH_C, self.const(e.value))
            self._push()
        elif isinstance(e, VarRef):
            self.emit(OP_PUSH_V, self.slot_of[e.ident])
            self._push()
        elif isinstance(e, Not):
            self.expr(e.operand)
            self.emit(OP_NOT)
        elif isinstance(e, BinOp):
            self.expr(e.left)
            self.expr(e.right)
            self.emit(_BINOP_CODE[e.op])
            self._depth -= 1
        else:
            raise AssertionError(f"unknown expression node {e!r}")

    def stmts(self, body: tuple[Stmt, ...]) -> None:
        for s in body:
            self.stmt(s)

    def stmt(self, s: Stmt) -> None:
        if isinstance(s, Assign):
            self.expr(s.rhs)
            self._depth -= 1
            card = self.enum_cards.get(s.target)
            if card is None:
                self.emit(OP_STORE, self.slot_of[s.target])
            else:
                self.emit(OP_STORE_E, self.slot_of[s.target], card)
        elif isinstance(s, If):
            self.expr(s.cond)
            self._depth -= 1
            jz = self.emit(OP_JZ)
            self.stmts(s.then)
            if s.orelse:
                jend = self.emit(OP_JMP)
                self.code[jz][1] = len(self.code)
                self.stmts(s.orelse)
                self.code[jend][1] = len(self.code)
            else:
                self.code[jz][1] = len(self.code)
        elif isinstance(s, SetD):
            self.emit(
                OP_SETD,
                self.slot_of[s.block + ".EnableIn"],
                self.slot_of[s.block + ".Set"],
                self.slot_of[s.block + ".Reset"],
                self.slot_of[s.block + ".Out"],
            )
        elif isinstance(s, Case):
            sel = self.slot_of[s.selector]
            end_jumps = []
            for value, arm in s.arms:
                skip = self.emit(OP_CASE_NE, sel, self.const(value))
                self.stmts(arm)
                end_jumps.append(self.emit(OP_JMP))
                self.code[skip][3] = len(self.code)
            for j in end_jumps:
                self.code[j][1] = len(self.code)
        else:
            raise AssertionError(f"unknown statement node {s!r}")


@lru_cache(maxsize=512)
def compile_program(prog: Program) -> CompiledProgram:
    slot_of = {d.ident: i for i, d in enumerate(prog.decls)}
    enum_cards = {d.ident: d.kind.card for d in prog.decls if d.kind.base == "ENUM"}
    em = _Emitter(slot_of, enum_cards)
    em.stmts(prog.body)
    em.emit(OP_HALT)

    init_vals = np.array([float(d.initial) for d in prog.decls], dtype=np.float64)
    input_slots = np.array([slot_of[i] for i in prog.input_order], dtype=np.int32)
    output_slots = np.array([slot_of[i] for i in prog.output_order], dtype=np.int32)
    dm = {d.ident: d for d in prog.decls}
    output_is_real = np.array([dm[i].kind == REAL for i in prog.output_order], dtype=bool)
    latch_slots = np.array(
        [slot_of[latch_out_ident(b)] for b in prog.setd_blocks], dtype=np.int32)
    input_pos = {ident: i for i, ident in enumerate(prog.input_order)}
    latch_input_pos = np.array(
        [input_pos.get(latch_out_ident(b), -1) for b in prog.setd_blocks], dtype=np.int32)

    return CompiledProgram(
        code=np.array(em.code, dtype=np.int32),
        consts=np.array(em.consts, dtype=np.float64),
        n_slots=len(prog.decls),
        slot_of=slot_of,
        init_vals=init_vals,
        input_slots=input_slots,
        output_slots=output_slots,
        output_is_real=output_is_real,
        latch_slots=latch_slots,
        latch_input_pos=latch_input_pos,
        max_stack=max(em.max_stack, 1),
    )
