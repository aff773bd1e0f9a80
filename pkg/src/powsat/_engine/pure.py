"""Pure-Python evaluation kernels.

Interface twin of the compiled ``_speedups`` extension; selected at import
time when the extension is unavailable or POWSAT_PURE is set.  Same
semantics, same scan order, same return values.
"""

from __future__ import annotations

from .program import APPLY, B_AND, B_ATOM, B_NOT, B_OR, PUSH_CONST, PUSH_VAR, REL, CompiledQuery


def _eval_atom(q: CompiledQuery, a: int, env, stride: int, base: int) -> int:
    """Run atom ``a``'s term program; variable v reads env[v*stride + base]."""
    ops = q.atom_ops
    stack = []
    i, end = q.atom_starts[a], q.atom_starts[a + 1]
    fm, ft, rm, rt = q.func_meta, q.func_table, q.rel_meta, q.rel_table
    m = q.carrier
    while i < end:
        op = ops[2 * i]
        arg = ops[2 * i + 1]
        if op == PUSH_VAR:
            stack.append(env[arg * stride + base])
        elif op == PUSH_CONST:
            stack.append(arg)
        elif op == APPLY:
            off, arity = fm[2 * arg], fm[2 * arg + 1]
            idx = 0
            for v in stack[len(stack) - arity :]:
                idx = idx * m + v
            del stack[len(stack) - arity :]
            stack.append(ft[off + idx])
        else:  # REL
            off, arity = rm[2 * arg], rm[2 * arg + 1]
            idx = 0
            for v in stack[len(stack) - arity :]:
                idx = idx * m + v
            return rt[off + idx]
        i += 1
    raise AssertionError("atom program missing relation test")


def _eval_bool(q: CompiledQuery, atom_vals) -> int:
    ops = q.bool_ops
    stack = []
    for i in range(len(ops) // 2):
        op = ops[2 * i]
        arg = ops[2 * i + 1]
        if op == B_ATOM:
            stack.append(atom_vals[arg])
        elif op == B_NOT:
            stack[-1] = 1 - stack[-1]
        elif op == B_AND:
            v = 1
            for x in stack[len(stack) - arg :]:
                v &= x
            del stack[len(stack) - arg :]
            stack.append(v)
        else:  # B_OR
            v = 0
            for x in stack[len(stack) - arg :]:
                v |= x
            del stack[len(stack) - arg :]
            stack.append(v)
    return stack[-1]


def _atom_values_component(q: CompiledQuery, env) -> list[int]:
    return [_eval_atom(q, a, env, 1, 0) for a in range(q.n_atoms)]


def _atom_values_power(q: CompiledQuery, point, nidx: int) -> list[int]:
    vals = []
    for a in range(q.n_atoms):
        v = 1
        for i in range(nidx):
            if not _eval_atom(q, a, point, nidx, i):
                v = 0
                break
        vals.append(v)
    return vals


def eval_component(q: CompiledQuery, env) -> int:
    """Evaluate under a single environment (sequence of values per variable)."""
    return _eval_bool(q, _atom_values_component(q, env))


def eval_power(q: CompiledQuery, point, nidx: int) -> int:
    """Evaluate with power semantics; point is var-major, index-minor."""
    return _eval_bool(q, _atom_values_power(q, point, nidx))


def scan_component(q: CompiledQuery) -> int:
    """First satisfying assignment rank in lexicographic order, or -1."""
    n, m = q.n_vars, q.carrier
    env = [0] * n
    rank, total = 0, m**n
    while rank < total:
        if _eval_bool(q, _atom_values_component(q, env)):
            return rank
        j = n - 1
        while j >= 0:
            env[j] += 1
            if env[j] < m:
                break
            env[j] = 0
            j -= 1
        rank += 1
    return -1


def scan_power(q: CompiledQuery, nidx: int) -> int:
    """First satisfying power point rank in lexicographic order, or -1."""
    n, m = q.n_vars, q.carrier
    digits = n * nidx
    point = [0] * digits
    rank, total = 0, m**digits
    while rank < total:
        if _eval_bool(q, _atom_values_power(q, point, nidx)):
            return rank
        j = digits - 1
        while j >= 0:
            point[j] += 1
            if point[j] < m:
                break
            point[j] = 0
            j -= 1
        rank += 1
    return -1
