"""Quantifier-free multiplication-only arithmetic over the positive
naturals with divisibility.

Positive naturals under multiplication factor uniquely into prime powers,
so the structure embeds into an unbounded power of additive exponent
arithmetic: a product of variables becomes a sum, divisibility becomes a
pointwise <=, and equality stays equality.  Only finitely many prime
coordinates of any witness are nonzero; the all-ones point (all exponents
zero) satisfies every positive atom, which is exactly the condition the
unbounded-power reduction needs of the default column.

Witnesses map the power model's exceptional columns to the first primes
and multiply back; they are re-checked with exact integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .errors import MalformedInputError
from .formula import And, Atom, Not, Or, QFFormula, Var, app
from .formula import Literal
from .oracles import lia_oracle
from .power_solver import PowerModel, PowerProblem, solve_power
from .result import SolveResult, sat, unknown, unsat
from .structures import UNBOUNDED

PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61)


@dataclass(frozen=True)
class SkolemAtom:
    """left = right or left | right, with both sides nonempty monomials
    (multisets of variables; the language has no numeric constants)."""

    left: tuple[str, ...]
    right: tuple[str, ...]
    divides: bool = False

    def __post_init__(self):
        if not self.left or not self.right:
            raise MalformedInputError("monomials must be nonempty")

    def negated(self):
        raise MalformedInputError("negate at the formula level")

    def __str__(self):
        op = "|" if self.divides else "="
        return f"{'*'.join(self.left)} {op} {'*'.join(self.right)}"


def monomial(*names: str) -> tuple[str, ...]:
    return tuple(sorted(names))


def skolem_eq(left: Iterable[str], right: Iterable[str]) -> SkolemAtom:
    return SkolemAtom(monomial(*left), monomial(*right))


def skolem_divides(left: Iterable[str], right: Iterable[str]) -> SkolemAtom:
    return SkolemAtom(monomial(*left), monomial(*right), divides=True)


def skolem_vars(f: QFFormula) -> tuple[str, ...]:
    out: set[str] = set()

    def walk(g):
        if isinstance(g, Atom):
            out.update(g.literal.left)
            out.update(g.literal.right)
        elif isinstance(g, Not):
            walk(g.inner)
        else:
            for p in g.parts:
                walk(p)

    walk(f)
    return tuple(sorted(out))


def _sum_term(names: tuple[str, ...]):
    term = Var(names[0], "int")
    for n in names[1:]:
        term = app("+", term, Var(n, "int"))
    return term


def to_additive(f: QFFormula) -> QFFormula:
    """Monomial atoms become exponent-sum atoms: products map to sums and
    divisibility to <= (componentwise on exponents)."""

    def walk(g):
        if isinstance(g, Atom):
            a = g.literal
            rel = "<=" if a.divides else "="
            return Atom(Literal(rel, (_sum_term(a.left), _sum_term(a.right))))
        if isinstance(g, Not):
            return Not(walk(g.inner))
        if isinstance(g, And):
            return And(tuple(walk(p) for p in g.parts))
        return Or(tuple(walk(p) for p in g.parts))

    return walk(f)


def _verify(f: QFFormula, model: Mapping[str, int]) -> bool:
    def mono(names):
        out = 1
        for n in names:
            out *= model[n]
        return out

    def walk(g) -> bool:
        if isinstance(g, Atom):
            a = g.literal
            l, r = mono(a.left), mono(a.right)
            return (r % l == 0) if a.divides else (l == r)
        if isinstance(g, Not):
            return not walk(g.inner)
        if isinstance(g, And):
            return all(walk(p) for p in g.parts)
        return any(walk(p) for p in g.parts)

    return walk(f)


def skolem_sat(f: QFFormula) -> SolveResult:
    """sat with a positive-integer witness, unsat, or unknown.

    The additive translation runs on the unbounded power of natural-number
    arithmetic; the default column is forced to all zeros (every positive
    atom holds of it, so this never loses solutions) and each exceptional
    column is assigned one prime.
    """
    names = skolem_vars(f)
    g = to_additive(f)
    problem = PowerProblem(lia_oracle(naturals=True), UNBOUNDED, g)
    r = solve_power(problem)
    if not r.is_sat:
        return r
    cert = r.certificate
    zeros = {v: 0 for v in names}
    oracle = problem.oracle
    from .power_solver import clause_part_formula

    if not oracle.model_check(clause_part_formula(cert.clause, ()), zeros):
        # cannot happen in a constant-free language; fail loudly if it does
        raise AssertionError("all-ones assignment broke a positive atom")
    power_model = PowerModel(default=zeros, exceptions=r.model.exceptions)
    if len(power_model.exceptions) > len(PRIMES):
        return unknown("witness needs more prime coordinates than provisioned")
    witness = {}
    for v in names:
        value = 1
        for (idx, column), prime in zip(power_model.exceptions, PRIMES):
            value *= prime ** column.get(v, 0)
        witness[v] = value
    if not _verify(f, witness):
        raise AssertionError("internal: reconstructed witness fails")
    return sat(witness, certificate=(power_model, cert))


def skolem_oracle(f: QFFormula, bound: int = 64) -> SolveResult:
    """Grid enumeration over [1..bound]^vars; unsat only within the bound."""
    names = skolem_vars(f)
    if len(names) > 4 or bound > 64:
        raise MalformedInputError("oracle limits: 4 variables, bound 64")
    if not names:
        return sat({}) if _verify(f, {}) else unsat()
    grids = np.meshgrid(*[np.arange(1, bound + 1, dtype=np.int64)] * len(names),
                        indexing="ij")
    env = {v: g.reshape(-1) for v, g in zip(names, grids)}

    def mono(ns):
        out = np.ones_like(env[names[0]])
        for n in ns:
            out = out * env[n]
        return out

    def walk(g):
        if isinstance(g, Atom):
            a = g.literal
            l, r = mono(a.left), mono(a.right)
            return (r % l == 0) if a.divides else (l == r)
        if isinstance(g, Not):
            return ~walk(g.inner)
        if isinstance(g, And):
            out = np.ones_like(env[names[0]], dtype=bool)
            for p in g.parts:
                out &= walk(p)
            return out
        out = np.zeros_like(env[names[0]], dtype=bool)
        for p in g.parts:
            out |= walk(p)
        return out

    hits = walk(f)
    if isinstance(hits, np.ndarray):
        where = np.flatnonzero(hits)
        if where.size:
            i = int(where[0])
            return sat({v: int(env[v][i]) for v in names})
        return unsat()
    return sat({v: 1 for v in names}) if hits else unsat()
