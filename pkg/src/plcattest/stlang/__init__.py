"""Parser, type checker and scan-cycle interpreter for the control dialect.

The dialect is a small structured-text subset: typed variable declarations
(BOOL / ENUM(k) / REAL, each tagged with a role class), assignments,
IF/ELSE, CASE over enum selectors, and set-dominant SETD latch blocks.
Programs are loop-free and recursion-free, so every scan terminates.

Execution backends: a compiled bytecode VM (``_corevm``, built via Cython)
with a pure-Python executor as fallback; see :mod:`plcattest.stlang.engine`.
A tree-walking reference interpreter lives in :mod:`plcattest.stlang.interp`
and is used for differential testing.
"""

from .ast import (
    Assign,
    BinOp,
    Case,
    If,
    IntLit,
    Not,
    Program,
    RealLit,
    SetD,
    ValueKind,
    VarClass,
    VarDecl,
    VarRef,
    BOOL,
    REAL,
    enum_kind,
    list_inputs,
)
from .engine import BACKEND_NAME, batch_scan, batch_scan_full, scan, scan_ex, snapshot_from_map
from .errors import EvalError, ParseError, StlangError, TypecheckError
from .parser import parse_program
from .unparse import unparse

__all__ = [
    "Assign",
    "BinOp",
    "BOOL",
    "BACKEND_NAME",
    "Case",
    "EvalError",
    "If",
    "IntLit",
    "Not",
    "ParseError",
    "Program",
    "REAL",
    "RealLit",
    "SetD",
    "StlangError",
    "TypecheckError",
    "ValueKind",
    "VarClass",
    "VarDecl",
    "VarRef",
    "batch_scan",
    "batch_scan_full",
    "enum_kind",
    "list_inputs",
    "parse_program",
    "scan",
    "scan_ex",
    "snapshot_from_map",
    "unparse",
]
