"""Compilation of (structure, formula) pairs into flat programs.

The enumeration kernels run a tiny two-level stack machine:

* per atom, a postfix term program ending in a relation test
  (``PUSH_VAR v`` / ``PUSH_CONST c`` / ``APPLY f`` / ``REL r``);
* one postfix boolean program over atom results
  (``B_ATOM a`` / ``B_NOT`` / ``B_AND n`` / ``B_OR n``).

All tables are flattened with mixed-radix indexing over the carrier, so a
kernel needs only integer arrays.  The same program drives both the
component semantics (one environment) and the power semantics (an atom
holds iff its relation test passes at every index).
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass

from ..errors import MalformedInputError
from ..formula import And, App, Atom, Const, Literal, Not, Or, Var

PUSH_VAR, PUSH_CONST, APPLY, REL = 0, 1, 2, 3
B_ATOM, B_NOT, B_AND, B_OR = 0, 1, 2, 3


@dataclass
class CompiledQuery:
    carrier: int
    n_vars: int
    n_atoms: int
    atom_ops: array        # int pairs (op, arg), all atoms concatenated
    atom_starts: array     # per atom: first pair index; sentinel at the end
    bool_ops: array        # int pairs (op, arg)
    func_meta: array       # per function id: (table offset, arity)
    func_table: array
    rel_meta: array        # per relation id: (table offset, arity)
    rel_table: array       # 0/1 flags
    term_stack: int
    bool_stack: int


def _flatten_tables(structure):
    func_ids, rel_ids = {}, {}
    func_meta, func_table = [], []
    rel_meta, rel_table = [], []
    m = structure.carrier_size
    for name in sorted(structure.functions):
        table = structure.functions[name]
        arity = len(next(iter(table), ()))
        func_ids[name] = len(func_meta) // 2
        func_meta += [len(func_table), arity]
        flat = [0] * (m**arity)
        for args, v in table.items():
            idx = 0
            for a in args:
                idx = idx * m + a
            flat[idx] = v
        func_table += flat
    for name in sorted(structure.relations):
        tuples = structure.relations[name]
        arity = len(next(iter(tuples), ()))
        if not tuples:
            # arity unrecoverable from an empty table; look it up if declared
            sig = structure.signature
            try:
                arity = len(sig.relation_profile(name))
            except Exception:
                arity = 0
        rel_ids[name] = len(rel_meta) // 2
        rel_meta += [len(rel_table), arity]
        flat = [0] * (m**arity)
        for t in tuples:
            idx = 0
            for a in t:
                idx = idx * m + a
            flat[idx] = 1
        rel_table += flat
    return func_ids, rel_ids, func_meta, func_table, rel_meta, rel_table


def compile_query(structure, f, variables) -> CompiledQuery:
    """Compile ``f`` over ``structure`` with the given variable order."""
    func_ids, rel_ids, func_meta, func_table, rel_meta, rel_table = _flatten_tables(structure)
    var_ids = {name: i for i, name in enumerate(variables)}

    atoms: dict[Literal, int] = {}
    atom_ops: list[int] = []
    atom_starts: list[int] = []
    term_stack = [1]

    def emit_term(t, ops, depth, max_depth):
        if isinstance(t, Var):
            if t.name not in var_ids:
                raise MalformedInputError(f"unbound variable {t.name!r}")
            ops += [PUSH_VAR, var_ids[t.name]]
            return max(max_depth, depth + 1), depth + 1
        if isinstance(t, Const):
            if t.name not in structure.constants:
                raise MalformedInputError(f"unknown constant {t.name!r}")
            ops += [PUSH_CONST, structure.constants[t.name]]
            return max(max_depth, depth + 1), depth + 1
        if isinstance(t, App):
            if t.func not in func_ids:
                raise MalformedInputError(f"unknown function {t.func!r}")
            arity = func_meta[2 * func_ids[t.func] + 1]
            if arity != len(t.args):
                raise MalformedInputError(f"function {t.func!r} arity mismatch")
            for a in t.args:
                max_depth, depth = emit_term(a, ops, depth, max_depth)
            ops += [APPLY, func_ids[t.func]]
            return max(max_depth, depth - arity + 1), depth - arity + 1
        raise MalformedInputError(f"not a term: {t!r}")

    def atom_id(lit: Literal) -> int:
        base = lit if lit.positive else lit.negated()
        if base in atoms:
            return atoms[base]
        if base.relation not in rel_ids:
            raise MalformedInputError(f"unknown relation {base.relation!r}")
        arity = rel_meta[2 * rel_ids[base.relation] + 1]
        if arity != len(base.args):
            raise MalformedInputError(f"relation {base.relation!r} arity mismatch")
        ops: list[int] = []
        depth, max_depth = 0, 0
        for a in base.args:
            max_depth, depth = emit_term(a, ops, depth, max_depth)
        ops += [REL, rel_ids[base.relation]]
        atoms[base] = len(atom_starts)
        atom_starts.append(len(atom_ops) // 2)
        atom_ops.extend(ops)
        term_stack[0] = max(term_stack[0], max_depth)
        return atoms[base]

    bool_ops: list[int] = []
    bool_stack = [1]

    def emit_formula(g, depth) -> int:
        if isinstance(g, Atom):
            lit = g.literal
            if not isinstance(lit, Literal):
                raise MalformedInputError("kernel formulas must use relational atoms")
            bool_ops.extend((B_ATOM, atom_id(lit)))
            if not lit.positive:
                bool_ops.extend((B_NOT, 0))
            bool_stack[0] = max(bool_stack[0], depth + 1)
            return depth + 1
        if isinstance(g, Not):
            d = emit_formula(g.inner, depth)
            bool_ops.extend((B_NOT, 0))
            return d
        if isinstance(g, (And, Or)):
            for p in g.parts:
                emit_formula(p, depth)
                depth += 1
            bool_ops.extend((B_AND if isinstance(g, And) else B_OR, len(g.parts)))
            bool_stack[0] = max(bool_stack[0], depth + 1)
            return depth - len(g.parts) + 1
        raise MalformedInputError(f"not a formula: {g!r}")

    emit_formula(f, 0)
    atom_starts.append(len(atom_ops) // 2)

    return CompiledQuery(
        carrier=structure.carrier_size,
        n_vars=len(var_ids),
        n_atoms=len(atom_starts) - 1,
        atom_ops=array("i", atom_ops or [0, 0]),  # pad: kernels take &buf[0]
        atom_starts=array("i", atom_starts),
        bool_ops=array("i", bool_ops),
        func_meta=array("i", func_meta or [0, 0]),
        func_table=array("i", func_table or [0]),
        rel_meta=array("i", rel_meta or [0, 0]),
        rel_table=array("i", rel_table or [0]),
        term_stack=term_stack[0] + 1,
        bool_stack=bool_stack[0] + 1,
    )
