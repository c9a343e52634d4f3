"""Pure-Python bytecode executor (fallback backend).

Executes the same instruction stream as the compiled extension, row by
row over a float64 slot matrix.  Returns the index of the first row that
hit an ENUM range violation, or -1 on success (mirroring the extension's
calling convention so the engine can treat both identically).
"""

from __future__ import annotations

import numpy as np

from . import ir


def run_rows(code: np.ndarray, consts: np.ndarray, vars_mat: np.ndarray) -> int:
    code_l = code.tolist()
    consts_l = consts.tolist()
    n_rows = vars_mat.shape[0]
    for r in range(n_rows):
        v = vars_mat[r].tolist()
        stack: list[float] = []
        pc = 0
        while True:
            op, a, b, c, _d = code_l[pc]
            pc += 1
            if op == ir.OP_PUSH_V:
                stack.append(v[a])
            elif op == ir.OP_PUSH_C:
                stack.append(consts_l[a])
            elif op == ir.OP_STORE:
                v[a] = stack.pop()
            elif op == ir.OP_STORE_E:
                x = stack.pop()
                if x < 0 or x >= b or x != int(x):
                    return r
                v[a] = x
            elif op == ir.OP_AND:
                y = stack.pop()
                stack[-1] = 1.0 if (stack[-1] != 0.0 and y != 0.0) else 0.0
            elif op == ir.OP_OR:
                y = stack.pop()
                stack[-1] = 1.0 if (stack[-1] != 0.0 or y != 0.0) else 0.0
            elif op == ir.OP_NOT:
                stack[-1] = 0.0 if stack[-1] != 0.0 else 1.0
            elif op == ir.OP_EQ:
                y = stack.pop()
                stack[-1] = 1.0 if stack[-1] == y else 0.0
            elif op == ir.OP_NE:
                y = stack.pop()
                stack[-1] = 1.0 if stack[-1] != y else 0.0
            elif op == ir.OP_LT:
                y = stack.pop()
                stack[-1] = 1.0 if stack[-1] < y else 0.0
            elif op == ir.OP_LE:
                y = stack.pop()
                stack[-1] = 1.0 if stack[-1] <= y else 0.0
            elif op == ir.OP_GT:
                y = stack.pop()
                stack[-1] = 1.0 if stack[-1] > y else 0.0
            elif op == ir.OP_GE:
                y = stack.pop()
                stack[-1] = 1.0 if stack[-1] >= y else 0.0
            elif op == ir.OP_ADD:
                y = stack.pop()
                stack[-1] = stack[-1] + y
            elif op == ir.OP_SUB:
                y = stack.pop()
                stack[-1] = stack[-1] - y
            elif op == ir.OP_MUL:
                y = stack.pop()
                stack[-1] = stack[-1] * y
            elif op == ir.OP_SETD:
                if v[a] != 0.0:
                    if v[b] != 0.0:
                        v[_d] = 1.0
                    elif v[c] != 0.0:
                        v[_d] = 0.0
            elif op == ir.OP_JMP:
                pc = a
            elif op == ir.OP_JZ:
                if stack.pop() == 0.0:
                    pc = a
            elif op == ir.OP_CASE_NE:
                if v[a] != consts_l[b]:
                    pc = c
            else:  # OP_HALT
                break
        vars_mat[r] = v
    return -1
