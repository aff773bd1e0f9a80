"""Explicit finite structures, pointwise power semantics, and the
brute-force satisfiability oracles used for differential testing.

Elements of a carrier are the dense naturals ``0 .. carrier_size-1`` so
that function and relation tables index cheaply.  Enumeration order is
lexicographic over (variable order, then carrier order), which makes every
witness deterministic.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Mapping

from . import _engine
from ._engine.program import compile_query
from .errors import CapacityError, MalformedInputError
from .formula import And, Atom, Literal, Not, Or, QFFormula, Term, Var, Const, App, free_vars
from .result import SolveResult, sat, unsat

DEFAULT_CAP = 10**7


def capacity_cap() -> int:
    """Enumeration cap; overridable through POWSAT_CAPACITY."""
    raw = os.environ.get("POWSAT_CAPACITY")
    if raw is None:
        return DEFAULT_CAP
    try:
        return int(raw)
    except ValueError:
        raise MalformedInputError(f"POWSAT_CAPACITY must be an integer, got {raw!r}")


@dataclass(frozen=True)
class FiniteStructure:
    """A finite interpretation: carrier ``0..carrier_size-1`` plus tables.

    ``functions[name]`` must be total over ``carrier ** arity`` argument
    tuples; ``relations[name]`` holds the satisfied tuples.
    """

    signature: object
    carrier_size: int
    constants: Mapping[str, int]
    functions: Mapping[str, Mapping[tuple[int, ...], int]]
    relations: Mapping[str, frozenset]

    def validate(self):
        m = self.carrier_size
        if m < 1:
            raise MalformedInputError("carrier must be non-empty")
        rng = range(m)
        for name, v in self.constants.items():
            if v not in rng:
                raise MalformedInputError(f"constant {name} outside carrier")
        for name, table in self.functions.items():
            arity = len(next(iter(table), ()))
            if len(table) != m**arity:
                raise MalformedInputError(f"function table {name} not total")
            for args, v in table.items():
                if len(args) != arity or any(a not in rng for a in args) or v not in rng:
                    raise MalformedInputError(f"function table {name} malformed")
        for name, tuples in self.relations.items():
            for t in tuples:
                if any(a not in rng for a in t):
                    raise MalformedInputError(f"relation table {name} outside carrier")
        return self


@dataclass(frozen=True)
class Finite:
    """Index set of known finite size n >= 1."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise MalformedInputError("index set must be non-empty")


@dataclass(frozen=True)
class Unbounded:
    """Index set of unspecified (arbitrarily large) size."""


UNBOUNDED = Unbounded()
IndexCard = Finite | Unbounded


@dataclass(frozen=True)
class PowerPoint:
    """One candidate assignment in a power: a vector per variable."""

    vectors: Mapping[str, tuple[int, ...]]

    def __post_init__(self):
        lengths = {len(v) for v in self.vectors.values()}
        if len(lengths) > 1:
            raise MalformedInputError("power point with mixed vector lengths")

    def length(self) -> int:
        for v in self.vectors.values():
            return len(v)
        return 0


# ---------------------------------------------------------------------------
# Tarskian evaluation


def eval_term(s: FiniteStructure, t: Term, env: Mapping[str, int]) -> int:
    if isinstance(t, Var):
        if t.name not in env:
            raise MalformedInputError(f"unbound variable {t.name!r}")
        return env[t.name]
    if isinstance(t, Const):
        if t.name not in s.constants:
            raise MalformedInputError(f"unknown constant {t.name!r}")
        return s.constants[t.name]
    if isinstance(t, App):
        if t.func not in s.functions:
            raise MalformedInputError(f"unknown function {t.func!r}")
        args = tuple(eval_term(s, a, env) for a in t.args)
        table = s.functions[t.func]
        if args not in table:
            raise MalformedInputError(f"function {t.func!r} undefined on {args}")
        return table[args]
    raise MalformedInputError(f"not a term: {t!r}")


def _literal_holds(s: FiniteStructure, lit: Literal, env) -> bool:
    if lit.relation not in s.relations:
        raise MalformedInputError(f"unknown relation {lit.relation!r}")
    args = tuple(eval_term(s, a, env) for a in lit.args)
    value = args in s.relations[lit.relation]
    return value if lit.positive else not value


def holds(s: FiniteStructure, f: QFFormula, env: Mapping[str, int]) -> bool:
    """Standard satisfaction of a quantifier-free formula."""
    if isinstance(f, Atom):
        return _literal_holds(s, f.literal, env)
    if isinstance(f, Not):
        return not holds(s, f.inner, env)
    if isinstance(f, And):
        return all(holds(s, p, env) for p in f.parts)
    if isinstance(f, Or):
        return any(holds(s, p, env) for p in f.parts)
    raise MalformedInputError(f"not a formula: {f!r}")


def power_holds(s: FiniteStructure, n: int, f: QFFormula, point: PowerPoint) -> bool:
    """Satisfaction in the n-fold power of ``s``.

    An atom holds iff its relation holds at every index; consequently a
    negated atom holds iff the relation fails at some index.
    """
    if n < 1:
        raise MalformedInputError("power size must be >= 1")
    if point.vectors and point.length() != n:
        raise MalformedInputError(f"vectors of length {point.length()} in a power of size {n}")

    def at(i: int):
        return {v: vec[i] for v, vec in point.vectors.items()}

    def go(g: QFFormula) -> bool:
        if isinstance(g, Atom):
            lit = g.literal
            if not lit.positive:
                lit = lit.negated()
                return not all(_literal_holds(s, lit, at(i)) for i in range(n))
            return all(_literal_holds(s, lit, at(i)) for i in range(n))
        if isinstance(g, Not):
            return not go(g.inner)
        if isinstance(g, And):
            return all(go(p) for p in g.parts)
        if isinstance(g, Or):
            return any(go(p) for p in g.parts)
        raise MalformedInputError(f"not a formula: {g!r}")

    return go(f)


# ---------------------------------------------------------------------------
# Brute-force oracles (kernel-backed)


def _sorted_vars(f: QFFormula, variables: Iterable[str] | None) -> list[str]:
    if variables is not None:
        return list(variables)
    return sorted(free_vars(f))


def brute_force_sat(
    s: FiniteStructure, f: QFFormula, variables: Iterable[str] | None = None
) -> SolveResult:
    """Exhaustive satisfiability over all assignments of the free variables.

    Raises CapacityError when carrier**vars exceeds the enumeration cap.
    """
    names = _sorted_vars(f, variables)
    m = s.carrier_size
    total = m ** len(names)
    if total > capacity_cap():
        raise CapacityError(f"{total} assignments exceed the cap")
    query = compile_query(s, f, names)
    rank = _engine.kernel.scan_component(query)
    if rank < 0:
        return unsat()
    env = {}
    for j, name in enumerate(names):
        env[name] = rank // m ** (len(names) - 1 - j) % m if m > 1 else 0
    return sat(env)


def brute_force_power_sat(
    s: FiniteStructure, n: IndexCard | int, f: QFFormula,
    variables: Iterable[str] | None = None,
) -> SolveResult:
    """Exhaustive satisfiability over all power points of ``s ** n``.

    Only finite powers are enumerable; an Unbounded index card raises
    CapacityError (cross-checks at several finite n are the honest
    substitute).
    """
    if isinstance(n, Unbounded):
        raise CapacityError("cannot enumerate an unbounded power")
    if isinstance(n, Finite):
        n = n.n
    if n < 1:
        raise MalformedInputError("power size must be >= 1")
    names = _sorted_vars(f, variables)
    m = s.carrier_size
    digits = len(names) * n
    total = m**digits
    if total > capacity_cap():
        raise CapacityError(f"{total} power points exceed the cap")
    query = compile_query(s, f, names)
    rank = _engine.kernel.scan_power(query, n)
    if rank < 0:
        return unsat()
    vectors = {}
    for j, name in enumerate(names):
        vec = []
        for i in range(n):
            p = j * n + i
            vec.append(rank // m ** (digits - 1 - p) % m if m > 1 else 0)
        vectors[name] = tuple(vec)
    return sat(PowerPoint(vectors))
