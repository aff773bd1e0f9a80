"""Shared fixtures: tiny structures and random generators for tests."""

from __future__ import annotations

import itertools
import random

from powsat.formula import Const, QFFormula, Signature, Var, app, atom, conj, disj, neg
from powsat.structures import FiniteStructure


def chain_structure(size: int) -> FiniteStructure:
    """A <=-chain 0 < 1 < ... with equality and a successor-with-cap."""
    sig = Signature(
        sorts=("elem",),
        constants=(("zero", "elem"), ("top", "elem")),
        functions=(("succ", ("elem",), "elem"),),
        relations=(("<=", ("elem", "elem")), ("=", ("elem", "elem"))),
    )
    n = size
    return FiniteStructure(
        signature=sig,
        carrier_size=n,
        constants={"zero": 0, "top": n - 1},
        functions={"succ": {(i,): min(i + 1, n - 1) for i in range(n)}},
        relations={
            "<=": frozenset((i, j) for i in range(n) for j in range(n) if i <= j),
            "=": frozenset((i, i) for i in range(n)),
        },
    ).validate()


def mod_structure(size: int) -> FiniteStructure:
    """Cyclic successor with equality; no order."""
    sig = Signature(
        sorts=("elem",),
        constants=(("zero", "elem"),),
        functions=(("succ", ("elem",), "elem"),),
        relations=(("=", ("elem", "elem")),),
    )
    n = size
    return FiniteStructure(
        signature=sig,
        carrier_size=n,
        constants={"zero": 0},
        functions={"succ": {(i,): (i + 1) % n for i in range(n)}},
        relations={"=": frozenset((i, i) for i in range(n))},
    ).validate()


def random_structure(rng: random.Random, max_carrier: int = 3) -> FiniteStructure:
    """A random structure with =, one random binary relation, one unary function."""
    n = rng.randint(1, max_carrier)
    sig = Signature(
        sorts=("elem",),
        constants=(("c0", "elem"),),
        functions=(("f", ("elem",), "elem"),),
        relations=(("=", ("elem", "elem")), ("R", ("elem", "elem"))),
    )
    pairs = [(i, j) for i in range(n) for j in range(n)]
    rel = frozenset(p for p in pairs if rng.random() < 0.5)
    return FiniteStructure(
        signature=sig,
        carrier_size=n,
        constants={"c0": rng.randrange(n)},
        functions={"f": {(i,): rng.randrange(n) for i in range(n)}},
        relations={"=": frozenset((i, i) for i in range(n)), "R": rel},
    ).validate()


def symbol_pools(s: FiniteStructure):
    sig = s.signature
    return (
        [name for name, _ in sig.relations],
        [name for name, _, _ in sig.functions],
        [name for name, _ in sig.constants],
    )


def random_term(rng: random.Random, variables, funcs, consts, depth: int):
    r = rng.random()
    if depth <= 0 or r < 0.55 or not funcs:
        if r > 0.85 and consts:
            return Const(rng.choice(consts))
        return Var(rng.choice(variables))
    return app(rng.choice(funcs), random_term(rng, variables, funcs, consts, depth - 1))


def random_formula(rng: random.Random, s: FiniteStructure, variables, n_literals: int) -> QFFormula:
    """A random and/or/not tree over the structure's binary relations."""
    rels, funcs, consts = symbol_pools(s)

    def lit():
        rel = rng.choice(rels)
        return atom(
            rel,
            random_term(rng, variables, funcs, consts, 1),
            random_term(rng, variables, funcs, consts, 1),
        )

    def build(k: int) -> QFFormula:
        if k <= 1:
            f = lit()
            return neg(f) if rng.random() < 0.4 else f
        split = rng.randint(1, k - 1)
        l, r = build(split), build(k - split)
        combine = rng.choice([conj, disj])
        out = combine(l, r)
        return neg(out) if rng.random() < 0.2 else out

    return build(n_literals)


def all_envs(variables, carrier: int):
    for combo in itertools.product(range(carrier), repeat=len(variables)):
        yield dict(zip(variables, combo))
