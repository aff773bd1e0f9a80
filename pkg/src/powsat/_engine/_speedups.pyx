# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled evaluation kernels; interface twin of ``pure``.

The scan loops are the hot path of the brute-force oracles: they enumerate
carrier**digits assignments with an odometer and run the compiled atom and
boolean programs at each step.
"""

from cpython.mem cimport PyMem_Free, PyMem_Malloc


cdef enum:
    OP_PUSH_VAR = 0
    OP_PUSH_CONST = 1
    OP_APPLY = 2
    OP_REL = 3

cdef enum:
    OP_B_ATOM = 0
    OP_B_NOT = 1
    OP_B_AND = 2
    OP_B_OR = 3


cdef struct Machine:
    int carrier
    int n_vars
    int n_atoms
    int n_bool_ops
    const int *atom_ops
    const int *atom_starts
    const int *bool_ops
    const int *func_meta
    const int *func_table
    const int *rel_meta
    const int *rel_table
    int *term_stack
    int *bool_stack
    int *atom_vals
    int *digits


cdef inline int _eval_atom(Machine *mc, int a, const int *env, int stride, int base) noexcept nogil:
    cdef int i = mc.atom_starts[a]
    cdef int end = mc.atom_starts[a + 1]
    cdef int sp = 0
    cdef int op, arg, off, arity, idx, j
    cdef int m = mc.carrier
    while i < end:
        op = mc.atom_ops[2 * i]
        arg = mc.atom_ops[2 * i + 1]
        if op == OP_PUSH_VAR:
            mc.term_stack[sp] = env[arg * stride + base]
            sp += 1
        elif op == OP_PUSH_CONST:
            mc.term_stack[sp] = arg
            sp += 1
        elif op == OP_APPLY:
            off = mc.func_meta[2 * arg]
            arity = mc.func_meta[2 * arg + 1]
            idx = 0
            for j in range(sp - arity, sp):
                idx = idx * m + mc.term_stack[j]
            sp -= arity
            mc.term_stack[sp] = mc.func_table[off + idx]
            sp += 1
        else:  # OP_REL
            off = mc.rel_meta[2 * arg]
            arity = mc.rel_meta[2 * arg + 1]
            idx = 0
            for j in range(sp - arity, sp):
                idx = idx * m + mc.term_stack[j]
            return mc.rel_table[off + idx]
        i += 1
    return 0


cdef inline int _eval_bool(Machine *mc) noexcept nogil:
    cdef int sp = 0
    cdef int i, op, arg, v, j
    for i in range(mc.n_bool_ops):
        op = mc.bool_ops[2 * i]
        arg = mc.bool_ops[2 * i + 1]
        if op == OP_B_ATOM:
            mc.bool_stack[sp] = mc.atom_vals[arg]
            sp += 1
        elif op == OP_B_NOT:
            mc.bool_stack[sp - 1] = 1 - mc.bool_stack[sp - 1]
        elif op == OP_B_AND:
            v = 1
            for j in range(sp - arg, sp):
                v = v & mc.bool_stack[j]
            sp -= arg
            mc.bool_stack[sp] = v
            sp += 1
        else:  # OP_B_OR
            v = 0
            for j in range(sp - arg, sp):
                v = v | mc.bool_stack[j]
            sp -= arg
            mc.bool_stack[sp] = v
            sp += 1
    return mc.bool_stack[sp - 1]


cdef inline int _eval_point(Machine *mc, const int *env, int stride, int nidx) noexcept nogil:
    cdef int a, i, v
    for a in range(mc.n_atoms):
        v = 1
        for i in range(nidx):
            if _eval_atom(mc, a, env, stride, i) == 0:
                v = 0
                break
        mc.atom_vals[a] = v
    return _eval_bool(mc)


cdef class _Views:
    """Keeps the Python-side buffers alive for the Machine pointers."""
    cdef int[::1] atom_ops, atom_starts, bool_ops, func_meta, func_table, rel_meta, rel_table

    def __cinit__(self, q):
        self.atom_ops = q.atom_ops
        self.atom_starts = q.atom_starts
        self.bool_ops = q.bool_ops
        self.func_meta = q.func_meta
        self.func_table = q.func_table
        self.rel_meta = q.rel_meta
        self.rel_table = q.rel_table


cdef int _setup(Machine *mc, _Views views, q, int n_digits) except -1:
    mc.carrier = q.carrier
    mc.n_vars = q.n_vars
    mc.n_atoms = q.n_atoms
    mc.n_bool_ops = len(q.bool_ops) // 2
    mc.atom_ops = &views.atom_ops[0]
    mc.atom_starts = &views.atom_starts[0]
    mc.bool_ops = &views.bool_ops[0]
    mc.func_meta = &views.func_meta[0]
    mc.func_table = &views.func_table[0]
    mc.rel_meta = &views.rel_meta[0]
    mc.rel_table = &views.rel_table[0]
    mc.term_stack = <int *> PyMem_Malloc(sizeof(int) * q.term_stack)
    mc.bool_stack = <int *> PyMem_Malloc(sizeof(int) * q.bool_stack)
    mc.atom_vals = <int *> PyMem_Malloc(sizeof(int) * (mc.n_atoms + 1))
    mc.digits = <int *> PyMem_Malloc(sizeof(int) * (n_digits + 1))
    if (mc.term_stack == NULL or mc.bool_stack == NULL
            or mc.atom_vals == NULL or mc.digits == NULL):
        _teardown(mc)
        raise MemoryError
    cdef int i
    for i in range(n_digits + 1):
        mc.digits[i] = 0
    return 0


cdef void _teardown(Machine *mc) noexcept:
    PyMem_Free(mc.term_stack)
    PyMem_Free(mc.bool_stack)
    PyMem_Free(mc.atom_vals)
    PyMem_Free(mc.digits)


def eval_component(q, env):
    """Evaluate under a single environment (sequence of values per variable)."""
    cdef Machine mc
    views = _Views(q)
    cdef int n = len(env)
    _setup(&mc, views, q, n)
    cdef int i
    for i in range(n):
        mc.digits[i] = env[i]
    try:
        return _eval_point(&mc, mc.digits, 1, 1)
    finally:
        _teardown(&mc)


def eval_power(q, point, int nidx):
    """Evaluate with power semantics; point is var-major, index-minor."""
    cdef Machine mc
    views = _Views(q)
    cdef int n = len(point)
    _setup(&mc, views, q, n)
    cdef int i
    for i in range(n):
        mc.digits[i] = point[i]
    try:
        return _eval_point(&mc, mc.digits, nidx, nidx)
    finally:
        _teardown(&mc)


cdef long _scan(Machine *mc, int n_digits, int stride, int nidx) noexcept nogil:
    cdef long rank = 0
    cdef long total = 1
    cdef int j
    for j in range(n_digits):
        total *= mc.carrier
    while rank < total:
        if _eval_point(mc, mc.digits, stride, nidx):
            return rank
        j = n_digits - 1
        while j >= 0:
            mc.digits[j] += 1
            if mc.digits[j] < mc.carrier:
                break
            mc.digits[j] = 0
            j -= 1
        rank += 1
    return -1


def scan_component(q):
    """First satisfying assignment rank in lexicographic order, or -1."""
    cdef Machine mc
    views = _Views(q)
    cdef int n = q.n_vars
    _setup(&mc, views, q, n)
    cdef long out
    try:
        with nogil:
            out = _scan(&mc, n, 1, 1)
        return out
    finally:
        _teardown(&mc)


def scan_power(q, int nidx):
    """First satisfying power point rank in lexicographic order, or -1."""
    cdef Machine mc
    views = _Views(q)
    cdef int n = q.n_vars * nidx
    _setup(&mc, views, q, n)
    cdef long out
    try:
        with nogil:
            out = _scan(&mc, n, nidx, nidx)
        return out
    finally:
        _teardown(&mc)
