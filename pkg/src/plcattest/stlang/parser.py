"""Recursive-descent parser producing type-checked Programs.

Grammar (see docs/language.md for the full description)::

    file      := "PROGRAM" ident var_block body_block
    var_block := "VAR" {decl} "END_VAR"
    decl      := ident ":" kind [":=" literal] ";" "CLASS" classname ";"
    kind      := "BOOL" | "REAL" | "ENUM" "(" INT ")"
    body_block:= "BODY" {stmt} "END_BODY"
    stmt      := assign | if | case | setd
    expr      := or-level, with precedence OR < AND < comparison < +/- < * < NOT

Comparisons are a single non-associative tier; chained comparisons must
be parenthesised.
"""

from __future__ import annotations

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
    ValueKind,
    VarClass,
    VarDecl,
    VarRef,
    build_program,
    enum_kind,
)
from .errors import ParseError
from .lexer import Token, tokenize
from .typecheck import typecheck

_CLASS_NAMES = {c.value: c for c in VarClass}
_STMT_STARTERS = ("IDENT", "IF", "CASE", "SETD")
_INT_LIMIT = 2**31 - 1  # keeps integer literals exact in the float64 VM


def _int_lit(t: Token) -> int:
    v = int(t.text)
    if v > _INT_LIMIT:
        raise ParseError(f"integer literal {v} exceeds {_INT_LIMIT}", t.line, t.col)
    return v


class _Parser:
    def __init__(self, toks: list[Token]):
        self.toks = toks
        self.pos = 0

    def peek(self) -> Token:
        return self.toks[self.pos]

    def next(self) -> Token:
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def expect(self, kind: str) -> Token:
        t = self.peek()
        if t.kind != kind:
            raise ParseError(f"expected {kind!r}, found {t.text or t.kind!r}", t.line, t.col)
        return self.next()

    def at(self, kind: str) -> bool:
        return self.peek().kind == kind

    # -- declarations --------------------------------------------------------

    def parse_file(self) -> tuple[str, tuple[VarDecl, ...], tuple[Stmt, ...]]:
        self.expect("PROGRAM")
        name = self.expect("IDENT").text
        self.expect("VAR")
        decls: list[VarDecl] = []
        while not self.at("END_VAR"):
            decls.append(self.parse_decl())
        self.expect("END_VAR")
        self.expect("BODY")
        body: list[Stmt] = []
        while not self.at("END_BODY"):
            body.append(self.parse_stmt())
        self.expect("END_BODY")
        self.expect("EOF")
        return name, tuple(decls), tuple(body)

    def parse_decl(self) -> VarDecl:
        ident = self.expect("IDENT")
        self.expect(":")
        kind = self.parse_kind()
        initial: int | float = 0.0 if kind == REAL else 0
        if self.at(":="):
            self.next()
            initial = self.parse_literal(kind)
        self.expect(";")
        self.expect("CLASS")
        cls_tok = self.expect("IDENT")
        if cls_tok.text not in _CLASS_NAMES:
            raise ParseError(f"unknown variable class {cls_tok.text!r}", cls_tok.line, cls_tok.col)
        self.expect(";")
        return VarDecl(ident.text, _CLASS_NAMES[cls_tok.text], kind, initial)

    def parse_kind(self) -> ValueKind:
        t = self.next()
        if t.kind == "BOOL":
            return BOOL
        if t.kind == "REAL":
            return REAL
        if t.kind == "ENUM":
            self.expect("(")
            card = _int_lit(self.expect("INTLIT"))
            self.expect(")")
            if card < 2:
                raise ParseError("enum cardinality must be >= 2", t.line, t.col)
            return enum_kind(card)
        raise ParseError(f"expected a value kind, found {t.text!r}", t.line, t.col)

    def parse_literal(self, kind: ValueKind) -> int | float:
        t = self.next()
        if t.kind == "INTLIT":
            return float(t.text) if kind == REAL else _int_lit(t)
        if t.kind == "REALLIT":
            if kind != REAL:
                raise ParseError(f"real literal not valid for {kind}", t.line, t.col)
            return float(t.text)
        raise ParseError(f"expected a literal, found {t.text!r}", t.line, t.col)

    # -- statements ----------------------------------------------------------

    def parse_stmt(self) -> Stmt:
        t = self.peek()
        if t.kind == "IDENT":
            target = self.next().text
            self.expect(":=")
            rhs = self.parse_expr()
            self.expect(";")
            return Assign(target, rhs)
        if t.kind == "IF":
            return self.parse_if()
        if t.kind == "CASE":
            return self.parse_case()
        if t.kind == "SETD":
            self.next()
            self.expect("(")
            block = self.expect("IDENT").text
            self.expect(")")
            self.expect(";")
            return SetD(block)
        raise ParseError(f"expected a statement, found {t.text or t.kind!r}", t.line, t.col)

    def parse_if(self) -> If:
        self.expect("IF")
        cond = self.parse_expr()
        self.expect("THEN")
        then: list[Stmt] = []
        while not self.at("ELSE") and not self.at("END_IF"):
            then.append(self.parse_stmt())
        orelse: list[Stmt] = []
        if self.at("ELSE"):
            self.next()
            while not self.at("END_IF"):
                orelse.append(self.parse_stmt())
        self.expect("END_IF")
        self.expect(";")
        return If(cond, tuple(then), tuple(orelse))

    def parse_case(self) -> Case:
        self.expect("CASE")
        selector = self.expect("IDENT").text
        self.expect("OF")
        arms: list[tuple[int, tuple[Stmt, ...]]] = []
        while not self.at("END_CASE"):
            head = self.expect("INTLIT")
            self.expect(":")
            stmts: list[Stmt] = []
            while self.peek().kind in _STMT_STARTERS:
                stmts.append(self.parse_stmt())
            arms.append((_int_lit(head), tuple(stmts)))
        self.expect("END_CASE")
        self.expect(";")
        return Case(selector, tuple(arms))

    # -- expressions ---------------------------------------------------------

    def parse_expr(self) -> Expr:
        return self.parse_or()

    def parse_or(self) -> Expr:
        e = self.parse_and()
        while self.at("OR"):
            self.next()
            e = BinOp("OR", e, self.parse_and())
        return e

    def parse_and(self) -> Expr:
        e = self.parse_cmp()
        while self.at("AND"):
            self.next()
            e = BinOp("AND", e, self.parse_cmp())
        return e

    def parse_cmp(self) -> Expr:
        e = self.parse_add()
        if self.peek().kind in ("=", "<>", "<", "<=", ">", ">="):
            op = self.next().kind
            e = BinOp(op, e, self.parse_add())
        return e

    def parse_add(self) -> Expr:
        e = self.parse_mul()
        while self.peek().kind in ("+", "-"):
            op = self.next().kind
            e = BinOp(op, e, self.parse_mul())
        return e

    def parse_mul(self) -> Expr:
        e = self.parse_unary()
        while self.at("*"):
            self.next()
            e = BinOp("*", e, self.parse_unary())
        return e

    def parse_unary(self) -> Expr:
        if self.at("NOT"):
            self.next()
            return Not(self.parse_unary())
        return self.parse_atom()

    def parse_atom(self) -> Expr:
        t = self.next()
        if t.kind == "INTLIT":
            return IntLit(_int_lit(t))
        if t.kind == "REALLIT":
            return RealLit(float(t.text))
        if t.kind == "IDENT":
            return VarRef(t.text)
        if t.kind == "(":
            e = self.parse_expr()
            self.expect(")")
            return e
        raise ParseError(f"expected an expression, found {t.text or t.kind!r}", t.line, t.col)


def parse_program(text: str) -> Program:
    """Parse and type-check one ``.stx`` program."""
    name, decls, body = _Parser(tokenize(text)).parse_file()
    prog = build_program(name, decls, body)
    typecheck(prog)
    return prog
