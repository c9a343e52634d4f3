"""Static checks for the control dialect.

Kinds are BOOL, ENUM(card) and REAL.  Integer literals adapt to their
context (0/1 as BOOL, values below the cardinality as ENUM, anything as
REAL); real literals are REAL only.  Logic operators need BOOL operands,
comparisons need same-kind operands (ordering is not defined on BOOL),
arithmetic is REAL-only.  Assignment targets must be writable, i.e. not
SensorReading/AlarmBit variables.

``infer_types`` records the resolved kind of every expression node keyed
by its AST path; the mutation engine uses this to build type-preserving
edits.
"""

from __future__ import annotations

import math

from .ast import (
    Assign,
    BinOp,
    BOOL,
    Case,
    Expr,
    IDENT_RE,
    If,
    IntLit,
    Not,
    Program,
    REAL,
    READONLY_CLASSES,
    RealLit,
    SETD_FIELDS,
    SetD,
    Stmt,
    ValueKind,
    VarClass,
    VarDecl,
    VarRef,
)
from .errors import TypecheckError

Path = tuple[object, ...]


def _check_decl(d: VarDecl) -> None:
    if not d.ident or not IDENT_RE.match(d.ident):
        raise TypecheckError(f"invalid identifier {d.ident!r}", ident=d.ident)
    if d.var_class is VarClass.OUTPUT_COMMAND and d.kind == REAL:
        raise TypecheckError(
            f"{d.ident}: OutputCommand variables must be BOOL or ENUM",
            ident=d.ident, expected="BOOL|ENUM", found=str(d.kind))
    if d.var_class is VarClass.SENSOR_READING and d.kind != REAL:
        raise TypecheckError(
            f"{d.ident}: SensorReading variables must be REAL",
            ident=d.ident, expected="REAL", found=str(d.kind))
    if not _value_fits(d.initial, d.kind):
        raise TypecheckError(
            f"{d.ident}: initial value {d.initial!r} does not fit {d.kind}",
            ident=d.ident, expected=str(d.kind), found=d.initial)


def _value_fits(v: int | float, kind: ValueKind) -> bool:
    if kind == REAL:
        return math.isfinite(float(v))
    if isinstance(v, float) and not float(v).is_integer():
        return False
    iv = int(v)
    if kind == BOOL:
        return iv in (0, 1)
    return 0 <= iv < (kind.card or 0)


class _Checker:
    def __init__(self, prog: Program):
        self.prog = prog
        self.decls = {d.ident: d for d in prog.decls}
        self.kinds: dict[Path, ValueKind] = {}

    # -- expressions ---------------------------------------------------------

    def _decl(self, ident: str) -> VarDecl:
        d = self.decls.get(ident)
        if d is None:
            raise TypecheckError(f"undeclared identifier {ident!r}", ident=ident)
        return d

    def _fit_literal(self, e: IntLit, kind: ValueKind) -> None:
        if not _value_fits(e.value, kind):
            raise TypecheckError(
                f"literal {e.value} does not fit {kind}",
                expected=str(kind), found=e.value)

    def infer(self, e: Expr, path: Path, expected: ValueKind | None = None) -> ValueKind:
        kind = self._infer(e, path, expected)
        self.kinds[path] = kind
        return kind

    def _infer(self, e: Expr, path: Path, expected: ValueKind | None) -> ValueKind:
        if isinstance(e, IntLit):
            if expected is None:
                return REAL
            self._fit_literal(e, expected)
            return expected
        if isinstance(e, RealLit):
            if not math.isfinite(e.value):
                raise TypecheckError(f"non-finite real literal {e.value!r}")
            if expected is not None and expected != REAL:
                raise TypecheckError(
                    f"real literal {e.value!r} where {expected} required",
                    expected=str(expected), found="REAL")
            return REAL
        if isinstance(e, VarRef):
            kind = self._decl(e.ident).kind
            if expected is not None and kind != expected:
                raise TypecheckError(
                    f"{e.ident} has kind {kind}, expected {expected}",
                    ident=e.ident, expected=str(expected), found=str(kind))
            return kind
        if isinstance(e, Not):
            self.infer(e.operand, path + ("operand",), BOOL)
            return self._require(BOOL, expected, "NOT")
        if isinstance(e, BinOp):
            if e.op in ("AND", "OR"):
                self.infer(e.left, path + ("left",), BOOL)
                self.infer(e.right, path + ("right",), BOOL)
                return self._require(BOOL, expected, e.op)
            if e.op in ("+", "-", "*"):
                self.infer(e.left, path + ("left",), REAL)
                self.infer(e.right, path + ("right",), REAL)
                return self._require(REAL, expected, e.op)
            # comparison: resolve the non-literal side first
            if isinstance(e.left, (IntLit, RealLit)) and not isinstance(e.right, (IntLit, RealLit)):
                rk = self.infer(e.right, path + ("right",))
                self.infer(e.left, path + ("left",), rk)
                side = rk
            else:
                lk = self.infer(e.left, path + ("left",))
                self.infer(e.right, path + ("right",), lk)
                side = lk
            if e.op not in ("=", "<>") and side == BOOL:
                raise TypecheckError(f"ordering operator {e.op!r} is not defined on BOOL",
                                     expected="ENUM|REAL", found="BOOL")
            return self._require(BOOL, expected, e.op)
        raise TypecheckError(f"unknown expression node {e!r}")

    def _require(self, actual: ValueKind, expected: ValueKind | None, what: str) -> ValueKind:
        if expected is not None and actual != expected:
            raise TypecheckError(f"{what} yields {actual}, expected {expected}",
                                 expected=str(expected), found=str(actual))
        return actual

    # -- statements ----------------------------------------------------------

    def check_stmts(self, stmts: tuple[Stmt, ...], base: Path) -> None:
        for i, s in enumerate(stmts):
            self.check_stmt(s, base + (i,))

    def check_stmt(self, s: Stmt, path: Path) -> None:
        if isinstance(s, Assign):
            d = self._decl(s.target)
            if d.var_class in READONLY_CLASSES:
                raise TypecheckError(
                    f"cannot assign to {d.var_class.value} variable {s.target!r}",
                    ident=s.target)
            self.infer(s.rhs, path + ("rhs",), d.kind)
        elif isinstance(s, If):
            self.infer(s.cond, path + ("cond",), BOOL)
            self.check_stmts(s.then, path + ("then",))
            self.check_stmts(s.orelse, path + ("else",))
        elif isinstance(s, Case):
            d = self._decl(s.selector)
            if d.kind.base != "ENUM":
                raise TypecheckError(
                    f"CASE selector {s.selector!r} must be ENUM, found {d.kind}",
                    ident=s.selector, expected="ENUM", found=str(d.kind))
            seen: set[int] = set()
            for value, arm in s.arms:
                if not 0 <= value < (d.kind.card or 0):
                    raise TypecheckError(
                        f"CASE arm {value} outside ENUM({d.kind.card})", ident=s.selector)
                if value in seen:
                    raise TypecheckError(f"duplicate CASE arm {value}", ident=s.selector)
                seen.add(value)
                self.check_stmts(arm, path + ("arm", value))
        elif isinstance(s, SetD):
            for field in SETD_FIELDS:
                ident = f"{s.block}.{field}"
                d = self._decl(ident)
                if d.kind != BOOL:
                    raise TypecheckError(
                        f"SETD field {ident} must be BOOL, found {d.kind}",
                        ident=ident, expected="BOOL", found=str(d.kind))
            out = self.decls[f"{s.block}.Out"]
            if out.var_class in READONLY_CLASSES:
                raise TypecheckError(
                    f"SETD output {out.ident} may not be a {out.var_class.value} variable",
                    ident=out.ident)
        else:
            raise TypecheckError(f"unknown statement node {s!r}")


def infer_types(prog: Program) -> dict[Path, ValueKind]:
    """Type-check ``prog`` and return the kind of every expression node."""
    seen: set[str] = set()
    for d in prog.decls:
        if d.ident in seen:
            raise TypecheckError(f"duplicate declaration of {d.ident!r}", ident=d.ident)
        seen.add(d.ident)
        _check_decl(d)
    chk = _Checker(prog)
    chk.check_stmts(prog.body, ())
    return chk.kinds


def typecheck(prog: Program) -> None:
    infer_types(prog)
