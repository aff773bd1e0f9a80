"""Seeded random instance generators for every logic.

One fixed weight/limit table per logic (the values below), shared by the
unit tests, the acceptance suite, and the ``fuzz`` command, so a (logic,
seed, count) triple always reproduces the same instance sequence.

Default limits:

===========  ==========================================================
power        carrier <= 3, |I| <= 3, <= 6 literals, <= 3 variables
qfbapa       <= 3 set vars, <= 2 int vars, MAXC <= 4, <= 4 atoms
qfbapai      k <= 2 definitions, <= 2 component vars, <= 1 constant,
             carrier <= 3, |I| <= 3
cal          <= 2 arrays, <= 2 stores, <= 2 reads, <= 2 index vars,
             <= 1 value var, carrier in {2,3}, |I| <= 3
skolem       <= 3 variables, <= 4 atoms, monomials of <= 3 factors
===========  ==========================================================
"""

from __future__ import annotations

import random

from .formula import Atom, Const, QFFormula, Signature, Var, app, atom, conj, disj, neg
from .structures import FiniteStructure, Finite
from . import qfbapa as qb


# ---------------------------------------------------------------------------
# Structures and power instances


def gen_structure(rng: random.Random, max_carrier: int = 3, min_carrier: int = 1) -> FiniteStructure:
    """Random component structure with =, one binary relation, one unary
    function, and one constant."""
    n = rng.randint(min_carrier, max_carrier)
    sig = Signature(
        sorts=("elem",),
        constants=(("c0", "elem"),),
        functions=(("f", ("elem",), "elem"),),
        relations=(("=", ("elem", "elem")), ("R", ("elem", "elem"))),
    )
    rel = frozenset(
        (i, j) for i in range(n) for j in range(n) if rng.random() < 0.5
    )
    return FiniteStructure(
        signature=sig,
        carrier_size=n,
        constants={"c0": rng.randrange(n)},
        functions={"f": {(i,): rng.randrange(n) for i in range(n)}},
        relations={"=": frozenset((i, i) for i in range(n)), "R": rel},
    ).validate()


def gen_term(rng: random.Random, variables, depth: int = 1):
    r = rng.random()
    if depth <= 0 or r < 0.6:
        if r < 0.12:
            return Const("c0")
        return Var(rng.choice(variables))
    return app("f", gen_term(rng, variables, depth - 1))


def gen_component_formula(
    rng: random.Random, variables, n_literals: int, relations=("=", "R"),
) -> QFFormula:
    def lit():
        a = atom(rng.choice(relations), gen_term(rng, variables), gen_term(rng, variables))
        return neg(a) if rng.random() < 0.4 else a

    def build(k: int) -> QFFormula:
        if k <= 1:
            return lit()
        split = rng.randint(1, k - 1)
        out = rng.choice([conj, disj])(build(split), build(k - split))
        return neg(out) if rng.random() < 0.15 else out

    return build(n_literals)


def gen_power_instance(rng: random.Random):
    """(structure, n, formula, variables) with the power-logic limits."""
    s = gen_structure(rng)
    nvars = rng.randint(1, 3)
    variables = ["x", "y", "z"][:nvars]
    f = gen_component_formula(rng, variables, rng.randint(1, 6))
    n = rng.randint(1, 3)
    return s, n, f, variables


# ---------------------------------------------------------------------------
# QFBAPA


def gen_set_expr(rng: random.Random, set_vars, depth: int = 2) -> qb.SetExpr:
    r = rng.random()
    if depth <= 0 or r < 0.5:
        if r < 0.05:
            return qb.EMPTY
        if r < 0.1:
            return qb.UNIVERSE
        return qb.SVar(rng.choice(set_vars))
    if r < 0.7:
        return qb.SUnion(gen_set_expr(rng, set_vars, depth - 1), gen_set_expr(rng, set_vars, depth - 1))
    if r < 0.9:
        return qb.SInter(gen_set_expr(rng, set_vars, depth - 1), gen_set_expr(rng, set_vars, depth - 1))
    return qb.SCompl(gen_set_expr(rng, set_vars, depth - 1))


def gen_pa_term(rng: random.Random, set_vars, int_vars, depth: int = 2) -> qb.PATerm:
    r = rng.random()
    if depth <= 0 or r < 0.55:
        if r < 0.25:
            return qb.Card(gen_set_expr(rng, set_vars, 1))
        if r < 0.35 and int_vars:
            return qb.IntVar(rng.choice(int_vars))
        if r < 0.45:
            return qb.MAXC
        return qb.IntConst(rng.randint(-4, 4))
    if r < 0.85:
        return qb.PSum(gen_pa_term(rng, set_vars, int_vars, depth - 1),
                       gen_pa_term(rng, set_vars, int_vars, depth - 1))
    return qb.PScale(rng.choice([-2, -1, 2, 3]), gen_pa_term(rng, set_vars, int_vars, depth - 1))


def gen_qfbapa(rng: random.Random, max_set_vars: int = 3, max_maxc: int = 4):
    """(formula, maxc) with the QFBAPA limits."""
    e = rng.randint(1, max_set_vars)
    set_vars = ["A", "B", "C"][:e]
    int_vars = ["k", "m"][: rng.randint(0, 2)]

    def qatom() -> qb.QAtom:
        r = rng.random()
        if r < 0.2:
            return qb.SetEq(gen_set_expr(rng, set_vars), gen_set_expr(rng, set_vars))
        if r < 0.4:
            return qb.SetSub(gen_set_expr(rng, set_vars), gen_set_expr(rng, set_vars))
        if r < 0.65:
            return qb.IntEq(gen_pa_term(rng, set_vars, int_vars),
                            gen_pa_term(rng, set_vars, int_vars))
        if r < 0.9:
            return qb.IntLe(gen_pa_term(rng, set_vars, int_vars),
                            gen_pa_term(rng, set_vars, int_vars))
        return qb.IntDvd(rng.randint(1, 4), gen_pa_term(rng, set_vars, int_vars))

    def build(k: int) -> QFFormula:
        if k <= 1:
            a = qb.batom(qatom())
            return neg(a) if rng.random() < 0.3 else a
        split = rng.randint(1, k - 1)
        out = rng.choice([conj, disj])(build(split), build(k - split))
        return neg(out) if rng.random() < 0.15 else out

    f = build(rng.randint(1, 4))
    return f, rng.randint(0, max_maxc)


# ---------------------------------------------------------------------------
# QFBAPAI


def gen_skeleton(rng: random.Random, set_vars, max_atoms: int = 3) -> QFFormula:
    """Set/cardinality skeleton over the given set variables; no free
    integer variables (they would not be enumerable by the oracle)."""

    def qatom() -> qb.QAtom:
        r = rng.random()
        if r < 0.2:
            return qb.SetEq(gen_set_expr(rng, set_vars, 1), gen_set_expr(rng, set_vars, 1))
        if r < 0.4:
            return qb.SetSub(gen_set_expr(rng, set_vars, 1), gen_set_expr(rng, set_vars, 1))
        if r < 0.7:
            return qb.IntEq(gen_pa_term(rng, set_vars, [], 1), gen_pa_term(rng, set_vars, [], 1))
        return qb.IntLe(gen_pa_term(rng, set_vars, [], 1), gen_pa_term(rng, set_vars, [], 1))

    def build(k: int) -> QFFormula:
        if k <= 1:
            a = qb.batom(qatom())
            return neg(a) if rng.random() < 0.25 else a
        split = rng.randint(1, k - 1)
        out = rng.choice([conj, disj])(build(split), build(k - split))
        return neg(out) if rng.random() < 0.1 else out

    return build(rng.randint(1, max_atoms))


def gen_qfbapai(rng: random.Random, coupled: bool | None = None):
    """A random interpreted-sets instance over a random finite component.

    ``coupled=True`` forces a shared constant into every definition (the
    family where the constant ties the regions together).
    """
    from .oracles import finite_oracle
    from .qfbapai import QFBAPAIProblem

    s = gen_structure(rng)
    n = rng.randint(1, 3)
    k = rng.randint(1, 2)
    arrays = tuple(["x", "y"][: rng.randint(1, 2)])
    if coupled is None:
        coupled = rng.random() < 0.4
    constants = ("c",) if coupled else ()
    set_vars = tuple(f"S{i + 1}" for i in range(k))
    pool = list(arrays) + list(constants)
    definitions = {}
    for v in set_vars:
        phi = gen_component_formula(rng, pool, rng.randint(1, 2))
        if coupled and "c" not in str(phi):
            phi = conj(phi, atom(rng.choice(["=", "R"]), Var(rng.choice(list(arrays))), Var("c")))
        definitions[v] = phi
    skeleton = gen_skeleton(rng, list(set_vars))
    return QFBAPAIProblem(
        oracle=finite_oracle(s),
        index_card=Finite(n),
        skeleton=skeleton,
        set_vars=set_vars,
        definitions=definitions,
        arrays=arrays,
        constants=constants,
    ).validate()


# ---------------------------------------------------------------------------
# CAL


def gen_cal(rng: random.Random):
    """(formula, structure, n) with the array-logic limits.

    Carriers start at 2: the singleton encoding in the translation needs
    two distinguishable component values.
    """
    from . import cal

    s = gen_structure(rng, min_carrier=2)
    n = rng.randint(1, 3)
    arrays = ["a", "b"][: rng.randint(1, 2)]
    index_vars = ["i", "j"][: rng.randint(1, 2)]
    value_vars = ["v"][: rng.randint(0, 1)]
    budget = {"stores": 2, "reads": 2}

    def array_term(depth: int = 1):
        r = rng.random()
        if budget["stores"] > 0 and r < 0.35 and depth > 0:
            budget["stores"] -= 1
            return cal.Store(array_term(depth - 1), rng.choice(index_vars), value_term(0))
        if r < 0.8:
            return cal.ArrayVar(rng.choice(arrays))
        return cal.ConstArray("c0")

    def value_term(depth: int = 1):
        r = rng.random()
        if budget["reads"] > 0 and r < 0.45:
            budget["reads"] -= 1
            return cal.Read(array_term(depth), rng.choice(index_vars))
        if value_vars and r < 0.6:
            return cal.ValueVar(rng.choice(value_vars))
        if r < 0.75:
            return cal.ValueConst("c0")
        if depth > 0:
            return cal.ValApp("f", (value_term(depth - 1),))
        return cal.ValueConst("c0")

    def comp_body():
        pool = arrays + value_vars
        lits = rng.randint(1, 2)
        return gen_component_formula(rng, pool, lits)

    def card_side():
        r = rng.random()
        if r < 0.55:
            return qb.Card(cal.SetComp(comp_body()))
        if r < 0.75:
            return qb.IntConst(rng.randint(0, 3))
        if r < 0.9:
            return qb.MAXC
        return qb.PSum(qb.Card(cal.SetComp(comp_body())), qb.IntConst(rng.randint(-1, 2)))

    def cal_atom():
        r = rng.random()
        if r < 0.35:
            return cal.ValueAtom(rng.choice(["=", "R"]), (value_term(), value_term()))
        if r < 0.6:
            return cal.ArrayAtom(rng.choice(["=", "R"]), (array_term(), array_term()))
        if r < 0.7 and len(index_vars) > 1:
            return cal.IndexEq(rng.choice(index_vars), rng.choice(index_vars))
        k = rng.random()
        if k < 0.8:
            return cal.CardAtom(rng.choice(["eq", "le"]), card_side(), card_side())
        return cal.CardAtom("dvd", card_side(), divisor=rng.randint(1, 3))

    def build(k: int) -> QFFormula:
        if k <= 1:
            a = cal.catom(cal_atom())
            return neg(a) if rng.random() < 0.35 else a
        split = rng.randint(1, k - 1)
        out = rng.choice([conj, disj])(build(split), build(k - split))
        return neg(out) if rng.random() < 0.1 else out

    return build(rng.randint(1, 3)), s, n


# ---------------------------------------------------------------------------
# Skolem arithmetic


def gen_skolem(rng: random.Random, max_vars: int = 3, max_atoms: int = 4) -> QFFormula:
    from .skolem import SkolemAtom

    names = ["x", "y", "z"][: rng.randint(1, max_vars)]

    def mono():
        return tuple(sorted(rng.choice(names) for _ in range(rng.randint(1, 3))))

    def satom():
        return Atom(SkolemAtom(mono(), mono(), divides=rng.random() < 0.4))

    def build(k: int) -> QFFormula:
        if k <= 1:
            a = satom()
            return neg(a) if rng.random() < 0.4 else a
        split = rng.randint(1, k - 1)
        out = rng.choice([conj, disj])(build(split), build(k - split))
        return neg(out) if rng.random() < 0.1 else out

    return build(rng.randint(1, max_atoms))


# ---------------------------------------------------------------------------
# Size-targeted formulas (for the clause-size sweep)


def gen_formula_of_size(rng: random.Random, target: int, variables=("x", "y", "z")) -> QFFormula:
    """A random component formula with symbol_size exactly ``target``."""
    from .formula import symbol_size

    for _ in range(10_000):
        f = gen_component_formula(rng, list(variables), max(1, target // 5))
        n = symbol_size(f)
        while n < target:
            extra = atom(rng.choice(["=", "R"]),
                         Var(rng.choice(variables)), Var(rng.choice(variables)))
            grown = conj(f, extra) if rng.random() < 0.5 else disj(f, extra)
            if symbol_size(grown) <= n:
                break
            f, n = grown, symbol_size(grown)
        if n == target:
            return f
    raise RuntimeError(f"could not hit size {target}")
