# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled bytecode executor (hot scan kernel).

Same semantics and calling convention as ``pyvm.run_rows``; the batch
loop releases the GIL.
"""

from libc.math cimport floor
from libc.stdlib cimport free, malloc


cdef int OP_PUSH_C = 0
cdef int OP_PUSH_V = 1
cdef int OP_STORE = 2
cdef int OP_STORE_E = 3
cdef int OP_NOT = 4
cdef int OP_AND = 5
cdef int OP_OR = 6
cdef int OP_EQ = 7
cdef int OP_NE = 8
cdef int OP_LT = 9
cdef int OP_LE = 10
cdef int OP_GT = 11
cdef int OP_GE = 12
cdef int OP_ADD = 13
cdef int OP_SUB = 14
cdef int OP_MUL = 15
cdef int OP_SETD = 16
cdef int OP_JMP = 17
cdef int OP_JZ = 18
cdef int OP_CASE_NE = 19
cdef int OP_HALT = 20


def run_rows(int[:, ::1] code, double[::1] consts, double[:, ::1] vars_mat):
    """Execute every row; return first ENUM-violation row index or -1."""
    cdef Py_ssize_t n_rows = vars_mat.shape[0]
    cdef Py_ssize_t n_code = code.shape[0]
    cdef Py_ssize_t r
    cdef int pc, op, a, b, c, d, sp
    cdef double x, y
    cdef double* stack
    cdef double* v
    cdef long bad = -1

    # worst-case stack bound: one slot per instruction
    stack = <double*> malloc(sizeof(double) * (n_code + 1))
    if stack == NULL:
        raise MemoryError()
    try:
        with nogil:
            for r in range(n_rows):
                v = &vars_mat[r, 0]
                sp = 0
                pc = 0
                while True:
                    op = code[pc, 0]
                    a = code[pc, 1]
                    b = code[pc, 2]
                    c = code[pc, 3]
                    d = code[pc, 4]
                    pc += 1
                    if op == OP_PUSH_V:
                        stack[sp] = v[a]
                        sp += 1
                    elif op == OP_PUSH_C:
                        stack[sp] = consts[a]
                        sp += 1
                    elif op == OP_STORE:
                        sp -= 1
                        v[a] = stack[sp]
                    elif op == OP_STORE_E:
                        sp -= 1
                        x = stack[sp]
                        if x < 0 or x >= b or x != floor(x):
                            bad = r
                            break
                        v[a] = x
                    elif op == OP_AND:
                        sp -= 1
                        y = stack[sp]
                        stack[sp - 1] = 1.0 if (stack[sp - 1] != 0.0 and y != 0.0) else 0.0
                    elif op == OP_OR:
                        sp -= 1
                        y = stack[sp]
                        stack[sp - 1] = 1.0 if (stack[sp - 1] != 0.0 or y != 0.0) else 0.0
                    elif op == OP_NOT:
                        stack[sp - 1] = 0.0 if stack[sp - 1] != 0.0 else 1.0
                    elif op == OP_EQ:
                        sp -= 1
                        stack[sp - 1] = 1.0 if stack[sp - 1] == stack[sp] else 0.0
                    elif op == OP_NE:
                        sp -= 1
                        stack[sp - 1] = 1.0 if stack[sp - 1] != stack[sp] else 0.0
                    elif op == OP_LT:
                        sp -= 1
                        stack[sp - 1] = 1.0 if stack[sp - 1] < stack[sp] else 0.0
                    elif op == OP_LE:
                        sp -= 1
                        stack[sp - 1] = 1.0 if stack[sp - 1] <= stack[sp] else 0.0
                    elif op == OP_GT:
                        sp -= 1
                        stack[sp - 1] = 1.0 if stack[sp - 1] > stack[sp] else 0.0
                    elif op == OP_GE:
                        sp -= 1
                        stack[sp - 1] = 1.0 if stack[sp - 1] >= stack[sp] else 0.0
                    elif op == OP_ADD:
                        sp -= 1
                        stack[sp - 1] = stack[sp - 1] + stack[sp]
                    elif op == OP_SUB:
                        sp -= 1
                        stack[sp - 1] = stack[sp - 1] - stack[sp]
                    elif op == OP_MUL:
                        sp -= 1
                        stack[sp - 1] = stack[sp - 1] * stack[sp]
                    elif op == OP_SETD:
                        if v[a] != 0.0:
                            if v[b] != 0.0:
                                v[d] = 1.0
                            elif v[c] != 0.0:
                                v[d] = 0.0
                    elif op == OP_JMP:
                        pc = a
                    elif op == OP_JZ:
                        sp -= 1
                        if stack[sp] == 0.0:
                            pc = a
                    elif op == OP_CASE_NE:
                        if v[a] != consts[b]:
                            pc = c
                    else:
                        break
                if bad >= 0:
                    break
    finally:
        free(stack)
    return bad
