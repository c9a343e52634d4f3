"""Tokenizer for the control dialect.

Dotted identifiers (``_MV_101_SR.Out``) are single tokens.  Comments use
``(* ... *)`` and do not nest.  Numeric literals are decimal, with an
optional fraction and exponent; a bare integer lexes as INT, anything
with a ``.`` or exponent as REAL.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParseError

KEYWORDS = frozenset(
    """PROGRAM VAR END_VAR BODY END_BODY IF THEN ELSE END_IF
       CASE OF END_CASE SETD CLASS BOOL ENUM REAL AND OR NOT""".split()
)

_SYMBOLS = (":=", "<>", "<=", ">=", "(", ")", ";", ":", "=", "<", ">", "+", "-", "*")


@dataclass(frozen=True)
class Token:
    kind: str  # keyword, symbol, or one of IDENT / INTLIT / REALLIT / EOF
    text: str
    line: int
    col: int


def _is_ident_start(c: str) -> bool:
    return c.isalpha() or c == "_"


def _is_ident_char(c: str) -> bool:
    return c.isalnum() or c == "_"


def tokenize(text: str) -> list[Token]:
    toks: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if c in " \t\r":
            i += 1
            col += 1
            continue
        if c == "(" and i + 1 < n and text[i + 1] == "*":
            end = text.find("*)", i + 2)
            if end < 0:
                raise ParseError("unterminated comment", line, col)
            skipped = text[i : end + 2]
            nl = skipped.count("\n")
            if nl:
                line += nl
                col = len(skipped) - skipped.rfind("\n")
            else:
                col += len(skipped)
            i = end + 2
            continue
        if _is_ident_start(c):
            start = i
            while i < n and _is_ident_char(text[i]):
                i += 1
            # dotted continuation: '.' followed by an ident segment
            while i + 1 < n and text[i] == "." and _is_ident_start(text[i + 1]):
                i += 1
                while i < n and _is_ident_char(text[i]):
                    i += 1
            word = text[start:i]
            if word in KEYWORDS:
                toks.append(Token(word, word, line, col))
            else:
                toks.append(Token("IDENT", word, line, col))
            col += i - start
            continue
        if c.isdigit():
            start = i
            while i < n and text[i].isdigit():
                i += 1
            is_real = False
            if i + 1 < n and text[i] == "." and text[i + 1].isdigit():
                is_real = True
                i += 1
                while i < n and text[i].isdigit():
                    i += 1
            if i < n and text[i] in "eE":
                j = i + 1
                if j < n and text[j] in "+-":
                    j += 1
                if j < n and text[j].isdigit():
                    is_real = True
                    i = j
                    while i < n and text[i].isdigit():
                        i += 1
            word = text[start:i]
            toks.append(Token("REALLIT" if is_real else "INTLIT", word, line, col))
            col += i - start
            continue
        for sym in _SYMBOLS:
            if text.startswith(sym, i):
                toks.append(Token(sym, sym, line, col))
                i += len(sym)
                col += len(sym)
                break
        else:
            raise ParseError(f"unexpected character {c!r}", line, col)
    toks.append(Token("EOF", "", line, col))
    return toks
