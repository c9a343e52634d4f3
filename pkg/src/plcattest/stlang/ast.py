"""AST node types for the control dialect.

All nodes are frozen dataclasses, so parsed programs are immutable,
hashable and safe to share across workers.  Statement sequences are
tuples; structural equality is plain dataclass equality (the round-trip
law ``parse(unparse(p)) == p`` relies on this).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*(\.[A-Za-z_][A-Za-z0-9_]*)*\Z")

#: Runtime value of a variable: BOOL/ENUM values are ints, REAL values floats.
Value = int | float


class VarClass(str, Enum):
    SENSOR_READING = "SensorReading"
    ALARM_BIT = "AlarmBit"
    ACTUATOR_STATE = "ActuatorState"
    STATE_VAR = "StateVar"
    TIMER = "Timer"
    HEALTHY_FLAG = "HealthyFlag"
    OUTPUT_COMMAND = "OutputCommand"
    INTERNAL = "Internal"


#: Classes whose variables appear in the program's input vector.
INPUT_CLASSES = frozenset(
    c for c in VarClass if c not in (VarClass.OUTPUT_COMMAND, VarClass.INTERNAL)
)
#: Classes the program body may never write to.
READONLY_CLASSES = frozenset((VarClass.SENSOR_READING, VarClass.ALARM_BIT))

#: Sub-fields every SETD block must declare.
SETD_FIELDS = ("EnableIn", "Set", "Reset", "Out")


@dataclass(frozen=True)
class ValueKind:
    """BOOL, ENUM(card) or REAL."""

    base: str
    card: int | None = None

    def __str__(self) -> str:
        if self.base == "ENUM":
            return f"ENUM({self.card})"
        return self.base


BOOL = ValueKind("BOOL")
REAL = ValueKind("REAL")


def enum_kind(card: int) -> ValueKind:
    return ValueKind("ENUM", card)


@dataclass(frozen=True)
class VarDecl:
    ident: str
    var_class: VarClass
    kind: ValueKind
    initial: Value


# --- expressions -----------------------------------------------------------

@dataclass(frozen=True)
class IntLit:
    value: int


@dataclass(frozen=True)
class RealLit:
    value: float


@dataclass(frozen=True)
class VarRef:
    ident: str


@dataclass(frozen=True)
class Not:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str  # AND OR = <> < <= > >= + - *
    left: "Expr"
    right: "Expr"


Expr = IntLit | RealLit | VarRef | Not | BinOp

LOGIC_OPS = ("AND", "OR")
REL_OPS = ("=", "<>", "<", "<=", ">", ">=")
ARITH_OPS = ("+", "-", "*")


# --- statements -------------------------------------------------------------

@dataclass(frozen=True)
class Assign:
    target: str
    rhs: Expr


@dataclass(frozen=True)
class If:
    cond: Expr
    then: tuple["Stmt", ...]
    orelse: tuple["Stmt", ...] = ()


@dataclass(frozen=True)
class SetD:
    block: str


@dataclass(frozen=True)
class Case:
    selector: str
    arms: tuple[tuple[int, tuple["Stmt", ...]], ...]


Stmt = Assign | If | SetD | Case


@dataclass(frozen=True)
class Program:
    """A parsed, type-checked control program.

    ``input_order`` lists every non-OutputCommand, non-Internal variable in
    declaration order; ``output_order`` the OutputCommand variables;
    ``setd_blocks`` the latch blocks in order of first SETD occurrence.
    """

    name: str
    decls: tuple[VarDecl, ...]
    body: tuple[Stmt, ...]
    input_order: tuple[str, ...]
    output_order: tuple[str, ...]
    setd_blocks: tuple[str, ...]


def _walk_setd_blocks(stmts: tuple[Stmt, ...], seen: list[str]) -> None:
    for s in stmts:
        if isinstance(s, SetD):
            if s.block not in seen:
                seen.append(s.block)
        elif isinstance(s, If):
            _walk_setd_blocks(s.then, seen)
            _walk_setd_blocks(s.orelse, seen)
        elif isinstance(s, Case):
            for _, arm in s.arms:
                _walk_setd_blocks(arm, seen)


def build_program(name: str, decls: tuple[VarDecl, ...], body: tuple[Stmt, ...]) -> Program:
    """Assemble a Program, deriving the input/output/latch orderings."""
    inputs = tuple(d.ident for d in decls if d.var_class in INPUT_CLASSES)
    outputs = tuple(d.ident for d in decls if d.var_class is VarClass.OUTPUT_COMMAND)
    blocks: list[str] = []
    _walk_setd_blocks(body, blocks)
    return Program(name, decls, body, inputs, outputs, tuple(blocks))


@lru_cache(maxsize=512)
def decl_map(prog: Program) -> dict[str, VarDecl]:
    return {d.ident: d for d in prog.decls}


def list_inputs(prog: Program) -> list[tuple[str, VarClass, ValueKind]]:
    """Input metadata in declaration order, stable across calls."""
    dm = decl_map(prog)
    return [(i, dm[i].var_class, dm[i].kind) for i in prog.input_order]


def latch_out_ident(block: str) -> str:
    return block + ".Out"
