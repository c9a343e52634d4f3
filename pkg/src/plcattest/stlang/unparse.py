"""Canonical text rendering of a Program.

``parse_program(unparse(p))`` is structurally equal to ``p``; comments
are not part of the AST so they never survive a round trip.  Parentheses
are emitted only where precedence requires them.
"""

from __future__ import annotations

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
)

_PREC = {"OR": 1, "AND": 2, "=": 3, "<>": 3, "<": 3, "<=": 3, ">": 3, ">=": 3,
         "+": 4, "-": 4, "*": 5}
_NOT_PREC = 6
_ATOM_PREC = 7


def _expr_prec(e: Expr) -> int:
    if isinstance(e, BinOp):
        return _PREC[e.op]
    if isinstance(e, Not):
        return _NOT_PREC
    return _ATOM_PREC


def _fmt_expr(e: Expr, min_prec: int = 0) -> str:
    if isinstance(e, IntLit):
        return str(e.value)
    if isinstance(e, RealLit):
        s = repr(e.value)
        return s
    if isinstance(e, VarRef):
        return e.ident
    if isinstance(e, Not):
        s = "NOT " + _fmt_expr(e.operand, _NOT_PREC)
        return f"({s})" if _NOT_PREC < min_prec else s
    p = _PREC[e.op]
    # comparisons are non-associative: both operands must sit strictly above
    lhs_min = p if e.op not in ("=", "<>", "<", "<=", ">", ">=") else p + 1
    s = f"{_fmt_expr(e.left, lhs_min)} {e.op} {_fmt_expr(e.right, p + 1)}"
    return f"({s})" if p < min_prec else s


def _fmt_initial(decl) -> str:
    if decl.kind == REAL:
        return repr(float(decl.initial))
    return str(int(decl.initial))


def _fmt_stmts(stmts: tuple[Stmt, ...], indent: int, out: list[str]) -> None:
    pad = "  " * indent
    for s in stmts:
        if isinstance(s, Assign):
            out.append(f"{pad}{s.target} := {_fmt_expr(s.rhs)};")
        elif isinstance(s, If):
            out.append(f"{pad}IF {_fmt_expr(s.cond)} THEN")
            _fmt_stmts(s.then, indent + 1, out)
            if s.orelse:
                out.append(f"{pad}ELSE")
                _fmt_stmts(s.orelse, indent + 1, out)
            out.append(f"{pad}END_IF;")
        elif isinstance(s, SetD):
            out.append(f"{pad}SETD({s.block});")
        elif isinstance(s, Case):
            out.append(f"{pad}CASE {s.selector} OF")
            for value, arm in s.arms:
                out.append(f"{pad}  {value}:")
                _fmt_stmts(arm, indent + 2, out)
            out.append(f"{pad}END_CASE;")
        else:
            raise AssertionError(f"unknown statement node {s!r}")


def unparse(prog: Program) -> str:
    lines = [f"PROGRAM {prog.name}", "VAR"]
    for d in prog.decls:
        lines.append(f"  {d.ident} : {d.kind} := {_fmt_initial(d)}; CLASS {d.var_class.value};")
    lines.append("END_VAR")
    lines.append("BODY")
    _fmt_stmts(prog.body, 1, lines)
    lines.append("END_BODY")
    return "\n".join(lines) + "\n"
