"""Satisfiability of quantifier-free set algebra with cardinalities.

Pipeline: rewrite set atoms into cardinality-zero atoms, introduce one
integer variable per distinct cardinality subterm, then linearize each
Venn region of the set variables into a nonnegative region-count variable
and hand the system to the integer backend.  Models materialize sets as
blocks of consecutive universe indices, one block per region, in
region-lexicographic order.

Two solving paths exist: full region expansion (up to ``EXPAND_CAP`` set
variables) and a sparse path that fixes all region counts outside a given
support to zero.  With the full support the sparse system is the expanded
system, which is exactly how the two are tested against each other.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import CapacityError, MalformedInputError
from .formula import And, Atom, Not, Or, QFFormula, conj, to_dnf
from .presburger import (
    LIAProblem, LinearAtom, clause_problems, lia_sat, linear_dvd, linear_eq, linear_le,
)
from .result import SolveResult, sat, unknown, unsat

REGION_CAP = 16
EXPAND_CAP = 12


# ---------------------------------------------------------------------------
# Set expressions and arithmetic terms


@dataclass(frozen=True)
class SVar:
    name: str


@dataclass(frozen=True)
class EmptySet:
    pass


@dataclass(frozen=True)
class UniverseSet:
    pass


@dataclass(frozen=True)
class SUnion:
    left: "SetExpr"
    right: "SetExpr"


@dataclass(frozen=True)
class SInter:
    left: "SetExpr"
    right: "SetExpr"


@dataclass(frozen=True)
class SCompl:
    inner: "SetExpr"


SetExpr = SVar | EmptySet | UniverseSet | SUnion | SInter | SCompl

EMPTY = EmptySet()
UNIVERSE = UniverseSet()


def s_union(*parts: SetExpr) -> SetExpr:
    if not parts:
        return EMPTY
    out = parts[0]
    for p in parts[1:]:
        out = SUnion(out, p)
    return out


def s_inter(*parts: SetExpr) -> SetExpr:
    if not parts:
        return UNIVERSE
    out = parts[0]
    for p in parts[1:]:
        out = SInter(out, p)
    return out


@dataclass(frozen=True)
class IntVar:
    name: str


@dataclass(frozen=True)
class IntConst:
    value: int


@dataclass(frozen=True)
class MaxCard:
    pass


@dataclass(frozen=True)
class PSum:
    left: "PATerm"
    right: "PATerm"


@dataclass(frozen=True)
class PScale:
    factor: int
    term: "PATerm"


@dataclass(frozen=True)
class Card:
    of: SetExpr


PATerm = IntVar | IntConst | MaxCard | PSum | PScale | Card

MAXC = MaxCard()


def p_sum(*terms: PATerm) -> PATerm:
    if not terms:
        return IntConst(0)
    out = terms[0]
    for t in terms[1:]:
        out = PSum(out, t)
    return out


# atoms: the payloads of formula-core trees


@dataclass(frozen=True)
class SetEq:
    left: SetExpr
    right: SetExpr


@dataclass(frozen=True)
class SetSub:
    left: SetExpr
    right: SetExpr


@dataclass(frozen=True)
class IntEq:
    left: PATerm
    right: PATerm


@dataclass(frozen=True)
class IntLe:
    left: PATerm
    right: PATerm


@dataclass(frozen=True)
class IntDvd:
    divisor: int
    term: PATerm


QAtom = SetEq | SetSub | IntEq | IntLe | IntDvd


def batom(a: QAtom) -> Atom:
    return Atom(a)


@dataclass(frozen=True)
class VennAssignment:
    """One region: a polarity per set variable (1 = inside, 0 = complement)."""

    bits: tuple[int, ...]

    def label(self) -> str:
        return "".join(map(str, self.bits))

    def region_expr(self, set_vars: Sequence[str]) -> SetExpr:
        parts = [
            SVar(v) if b else SCompl(SVar(v))
            for v, b in zip(set_vars, self.bits)
        ]
        return s_inter(*parts)


@dataclass(frozen=True)
class SetModel:
    """An explicit universe {0..maxc-1} with one subset per set variable."""

    maxc: int
    sets: Mapping[str, frozenset]
    ints: Mapping[str, int]


# ---------------------------------------------------------------------------
# Syntax walks


def _walk_atoms(f: QFFormula):
    if isinstance(f, Atom):
        yield f.literal
    elif isinstance(f, Not):
        yield from _walk_atoms(f.inner)
    else:
        for p in f.parts:
            yield from _walk_atoms(p)


def _set_vars_of_expr(e: SetExpr, out: set):
    if isinstance(e, SVar):
        out.add(e.name)
    elif isinstance(e, (SUnion, SInter)):
        _set_vars_of_expr(e.left, out)
        _set_vars_of_expr(e.right, out)
    elif isinstance(e, SCompl):
        _set_vars_of_expr(e.inner, out)


def _vars_of_term(t: PATerm, sets: set, ints: set):
    if isinstance(t, IntVar):
        ints.add(t.name)
    elif isinstance(t, Card):
        _set_vars_of_expr(t.of, sets)
    elif isinstance(t, PSum):
        _vars_of_term(t.left, sets, ints)
        _vars_of_term(t.right, sets, ints)
    elif isinstance(t, PScale):
        _vars_of_term(t.term, sets, ints)


def formula_variables(f: QFFormula) -> tuple[tuple[str, ...], tuple[str, ...]]:
    """(sorted set variables, sorted integer variables) of a formula."""
    sets: set = set()
    ints: set = set()
    for a in _walk_atoms(f):
        if isinstance(a, (SetEq, SetSub)):
            _set_vars_of_expr(a.left, sets)
            _set_vars_of_expr(a.right, sets)
        elif isinstance(a, (IntEq, IntLe)):
            _vars_of_term(a.left, sets, ints)
            _vars_of_term(a.right, sets, ints)
        elif isinstance(a, IntDvd):
            _vars_of_term(a.term, sets, ints)
        else:
            raise MalformedInputError(f"not a set/arithmetic atom: {a!r}")
    return tuple(sorted(sets)), tuple(sorted(ints))


def qfbapa_size(f: QFFormula) -> int:
    """Symbol count: one unit per variable/constant/operator occurrence."""

    def expr(e) -> int:
        if isinstance(e, (SVar, EmptySet, UniverseSet)):
            return 1
        if isinstance(e, SCompl):
            return 1 + expr(e.inner)
        return 1 + expr(e.left) + expr(e.right)

    def term(t) -> int:
        if isinstance(t, (IntVar, IntConst, MaxCard)):
            return 1
        if isinstance(t, Card):
            return 1 + expr(t.of)
        if isinstance(t, PScale):
            return 2 + term(t.term)
        return 1 + term(t.left) + term(t.right)

    def go(g) -> int:
        if isinstance(g, Atom):
            a = g.literal
            if isinstance(a, (SetEq, SetSub)):
                return 1 + expr(a.left) + expr(a.right)
            if isinstance(a, IntDvd):
                return 2 + term(a.term)
            return 1 + term(a.left) + term(a.right)
        if isinstance(g, Not):
            return 1 + go(g.inner)
        return 1 + sum(go(p) for p in g.parts)

    return go(f)


# ---------------------------------------------------------------------------
# Normalization and cardinality variables


def normalize(f: QFFormula) -> QFFormula:
    """Rewrite set equality/inclusion atoms into |region| = 0 atoms."""

    def zero_card(e: SetExpr) -> Atom:
        return batom(IntEq(Card(e), IntConst(0)))

    def go(g: QFFormula) -> QFFormula:
        if isinstance(g, Atom):
            a = g.literal
            if isinstance(a, SetEq):
                return And((zero_card(SInter(a.left, SCompl(a.right))),
                            zero_card(SInter(a.right, SCompl(a.left)))))
            if isinstance(a, SetSub):
                return zero_card(SInter(a.left, SCompl(a.right)))
            return g
        if isinstance(g, Not):
            return Not(go(g.inner))
        if isinstance(g, And):
            return And(tuple(go(p) for p in g.parts))
        return Or(tuple(go(p) for p in g.parts))

    return go(f)


def introduce_card_vars(f: QFFormula) -> tuple[QFFormula, list[tuple[SetExpr, str]]]:
    """Replace each distinct cardinality subterm by a fresh integer
    variable; MAXC and |U| share the universe variable.  The input must be
    normalized.  Returns the arithmetic formula (linear atoms) and the
    (set expression, variable) definitions in first-use order."""
    defs: dict[SetExpr, str] = {}
    order: list[tuple[SetExpr, str]] = []

    def card_var(e: SetExpr) -> str:
        if e not in defs:
            name = f"k!{len(defs)}" if not isinstance(e, UniverseSet) else "k!U"
            defs[e] = name
            order.append((e, name))
        return defs[e]

    def term(t: PATerm) -> tuple[dict[str, int], int]:
        if isinstance(t, IntVar):
            if t.name.split("!")[0] in ("k", "l") and "!" in t.name:
                raise MalformedInputError(f"variable name {t.name!r} is reserved")
            return {t.name: 1}, 0
        if isinstance(t, IntConst):
            return {}, t.value
        if isinstance(t, MaxCard):
            return {card_var(UNIVERSE): 1}, 0
        if isinstance(t, Card):
            return {card_var(t.of): 1}, 0
        if isinstance(t, PSum):
            cl, kl = term(t.left)
            cr, kr = term(t.right)
            for v, a in cr.items():
                cl[v] = cl.get(v, 0) + a
            return cl, kl + kr
        if isinstance(t, PScale):
            c, k = term(t.term)
            return {v: t.factor * a for v, a in c.items()}, t.factor * k
        raise MalformedInputError(f"not an arithmetic term: {t!r}")

    def linear(a: QAtom) -> LinearAtom:
        if isinstance(a, (SetEq, SetSub)):
            raise MalformedInputError("set atom survived normalization")
        if isinstance(a, IntDvd):
            c, k = term(a.term)
            return linear_dvd(a.divisor, c, k)
        cl, kl = term(a.left)
        cr, kr = term(a.right)
        diff = dict(cl)
        for v, x in cr.items():
            diff[v] = diff.get(v, 0) - x
        if isinstance(a, IntEq):
            return linear_eq(diff, kl - kr)
        return linear_le(diff, kl - kr)

    def go(g: QFFormula) -> QFFormula:
        if isinstance(g, Atom):
            return Atom(linear(g.literal))
        if isinstance(g, Not):
            return Not(go(g.inner))
        if isinstance(g, And):
            return And(tuple(go(p) for p in g.parts))
        return Or(tuple(go(p) for p in g.parts))

    return go(f), order


def indicator(e: SetExpr, assignment: Mapping[str, int]) -> int:
    """Evaluate a set expression as a propositional formula at one region."""
    if isinstance(e, SVar):
        return assignment[e.name]
    if isinstance(e, EmptySet):
        return 0
    if isinstance(e, UniverseSet):
        return 1
    if isinstance(e, SUnion):
        return indicator(e.left, assignment) | indicator(e.right, assignment)
    if isinstance(e, SInter):
        return indicator(e.left, assignment) & indicator(e.right, assignment)
    return 1 - indicator(e.inner, assignment)


def region_var(beta: VennAssignment) -> str:
    return f"l!{beta.label()}"


def all_regions(e: int) -> list[VennAssignment]:
    return [VennAssignment(bits) for bits in itertools.product((0, 1), repeat=e)]


def venn_expand(
    g_atoms: Sequence[LinearAtom],
    card_defs: Sequence[tuple[SetExpr, str]],
    set_vars: Sequence[str],
    maxc: int | None = None,
) -> LIAProblem:
    """The full region system: one nonnegative count per Venn region, each
    cardinality variable equated with its indicator sum, and the region
    total pinned to ``maxc`` when given."""
    e = len(set_vars)
    if e > REGION_CAP:
        raise CapacityError(f"{e} set variables exceed the region cap")
    regions = all_regions(e)
    atoms = list(g_atoms)
    for expr, kvar in card_defs:
        coeffs = {kvar: 1}
        for beta in regions:
            if indicator(expr, dict(zip(set_vars, beta.bits))):
                coeffs[region_var(beta)] = -1
        atoms.append(linear_eq(coeffs, 0))
    if maxc is not None:
        atoms.append(linear_eq({region_var(b): 1 for b in regions}, -maxc))
    nonneg = frozenset(region_var(b) for b in regions)
    return LIAProblem(tuple(atoms), nonneg)


def sparse_solve(
    g: QFFormula,
    card_defs: Sequence[tuple[SetExpr, str]],
    set_vars: Sequence[str],
    support: Sequence[VennAssignment],
    maxc: int | None = None,
) -> SolveResult:
    """Solve with every region count outside ``support`` fixed to zero.

    The model maps each support region label to its count (plus the
    integer variables).  With the full support this is exactly the
    expanded system.
    """
    seen = set()
    for beta in support:
        if beta.bits in seen:
            raise MalformedInputError("duplicate region in support")
        seen.add(beta.bits)
    atoms: list[LinearAtom] = []
    for expr, kvar in card_defs:
        coeffs = {kvar: 1}
        for beta in support:
            if indicator(expr, dict(zip(set_vars, beta.bits))):
                coeffs[region_var(beta)] = -1
        atoms.append(linear_eq(coeffs, 0))
    if maxc is not None:
        atoms.append(linear_eq({region_var(b): 1 for b in support}, -maxc))
    nonneg = frozenset(region_var(b) for b in support)

    saw_unknown = False
    for clause in to_dnf(g):
        for problem in clause_problems(clause.literals, nonneg):
            full = LIAProblem(problem.atoms + tuple(atoms), nonneg)
            r = lia_sat(full)
            if r.is_sat:
                counts = {b.label(): r.model.get(region_var(b), 0) for b in support}
                ints = {v: x for v, x in r.model.items() if "!" not in v}
                return sat({"regions": counts, "ints": ints, "model": r.model})
            if r.is_unknown:
                saw_unknown = True
    if saw_unknown:
        return unknown("integer backend hit a limit")
    return unsat()


# ---------------------------------------------------------------------------
# Model evaluation (independent of the solving encodings)


def eval_set(e: SetExpr, m: SetModel) -> frozenset:
    universe = frozenset(range(m.maxc))
    if isinstance(e, SVar):
        return frozenset(m.sets.get(e.name, frozenset()))
    if isinstance(e, EmptySet):
        return frozenset()
    if isinstance(e, UniverseSet):
        return universe
    if isinstance(e, SUnion):
        return eval_set(e.left, m) | eval_set(e.right, m)
    if isinstance(e, SInter):
        return eval_set(e.left, m) & eval_set(e.right, m)
    return universe - eval_set(e.inner, m)


def eval_term(t: PATerm, m: SetModel) -> int:
    if isinstance(t, IntVar):
        return m.ints[t.name]
    if isinstance(t, IntConst):
        return t.value
    if isinstance(t, MaxCard):
        return m.maxc
    if isinstance(t, Card):
        return len(eval_set(t.of, m))
    if isinstance(t, PSum):
        return eval_term(t.left, m) + eval_term(t.right, m)
    return t.factor * eval_term(t.term, m)


def eval_formula(f: QFFormula, m: SetModel) -> bool:
    if isinstance(f, Atom):
        a = f.literal
        if isinstance(a, SetEq):
            return eval_set(a.left, m) == eval_set(a.right, m)
        if isinstance(a, SetSub):
            return eval_set(a.left, m) <= eval_set(a.right, m)
        if isinstance(a, IntEq):
            return eval_term(a.left, m) == eval_term(a.right, m)
        if isinstance(a, IntLe):
            return eval_term(a.left, m) <= eval_term(a.right, m)
        return eval_term(a.term, m) % a.divisor == 0
    if isinstance(f, Not):
        return not eval_formula(f.inner, m)
    if isinstance(f, And):
        return all(eval_formula(p, m) for p in f.parts)
    return any(eval_formula(p, m) for p in f.parts)


# ---------------------------------------------------------------------------
# The solver


def _materialize(
    set_vars: Sequence[str], regions: Sequence[VennAssignment], counts: Mapping[str, int],
    ints: Mapping[str, int], int_vars: Sequence[str],
) -> SetModel:
    start = 0
    sets: dict[str, set] = {v: set() for v in set_vars}
    for beta in sorted(regions, key=lambda b: b.bits):
        c = counts.get(beta.label(), 0)
        block = range(start, start + c)
        start += c
        for v, bit in zip(set_vars, beta.bits):
            if bit:
                sets[v].update(block)
    return SetModel(
        maxc=start,
        sets={v: frozenset(s) for v, s in sets.items()},
        ints={v: ints.get(v, 0) for v in int_vars},
    )


def _merged_region_system(
    card_defs: Sequence[tuple[SetExpr, str]], set_vars: Sequence[str], maxc: int | None,
) -> tuple[list[LinearAtom], frozenset[str], dict[str, list[VennAssignment]]]:
    """Region system with indistinguishable regions merged.

    Regions sharing one indicator column over every definition (and the
    total row) are interchangeable in the arithmetic; one count variable
    stands for the group and the group's representative region receives
    the whole count on materialization.  Verdict-equivalent to the full
    expansion and exponentially smaller for structured inputs.
    """
    e = len(set_vars)
    groups: dict[tuple[int, ...], list[VennAssignment]] = {}
    for beta in all_regions(e):
        assignment = dict(zip(set_vars, beta.bits))
        key = tuple(indicator(expr, assignment) for expr, _ in card_defs)
        groups.setdefault(key, []).append(beta)
    var_of_key = {}
    rep_of_var: dict[str, list[VennAssignment]] = {}
    for key, members in sorted(groups.items(), key=lambda kv: kv[1][0].bits):
        name = region_var(members[0])
        var_of_key[key] = name
        rep_of_var[name] = members
    atoms = []
    for j, (expr, kvar) in enumerate(card_defs):
        coeffs = {kvar: 1}
        for key, name in var_of_key.items():
            if key[j]:
                coeffs[name] = -1
        atoms.append(linear_eq(coeffs, 0))
    if maxc is not None:
        atoms.append(linear_eq({name: 1 for name in var_of_key.values()}, -maxc))
    return atoms, frozenset(var_of_key.values()), rep_of_var


def qfbapa_sat(
    f: QFFormula,
    maxc: int | None = None,
    region_cap: int = REGION_CAP,
    expand_cap: int = EXPAND_CAP,
) -> SolveResult:
    """Decide a set/arithmetic formula; ``maxc=None`` leaves the universe
    size symbolic.  A sat verdict carries a SetModel that re-evaluates to
    true under the direct set semantics."""
    set_vars, int_vars = formula_variables(f)
    e = len(set_vars)
    if e > region_cap:
        raise CapacityError(f"{e} set variables exceed the cap {region_cap}")

    g, card_defs = introduce_card_vars(normalize(f))
    if not any(isinstance(expr, UniverseSet) for expr, _ in card_defs):
        card_defs = list(card_defs) + [(UNIVERSE, "k!U")]
    extra = [linear_le({"k!U": -1}, 0)]
    if maxc is not None:
        extra.append(linear_eq({"k!U": 1}, -maxc))

    if e <= expand_cap:
        atoms, nonneg, rep_of_var = _merged_region_system(card_defs, set_vars, None)
        saw_unknown = False
        for clause in to_dnf(g):
            for problem in clause_problems(clause.literals, nonneg):
                full = LIAProblem(problem.atoms + tuple(atoms) + tuple(extra), nonneg)
                r = lia_sat(full)
                if r.is_unknown:
                    saw_unknown = True
                    continue
                if r.is_sat:
                    counts = {
                        members[0].label(): r.model.get(name, 0)
                        for name, members in rep_of_var.items()
                    }
                    model = _materialize(set_vars, all_regions(e), counts, r.model, int_vars)
                    if not eval_formula(f, model):
                        raise AssertionError("internal: model fails set semantics")
                    return sat(model)
        if saw_unknown:
            return unknown("integer backend hit a limit")
        return unsat()

    # sparse path: iterative deepening over supports of growing size
    g_full = conj(g, *(Atom(a) for a in extra))
    regions = all_regions(e)
    weights = {}
    for beta in regions:
        assignment = dict(zip(set_vars, beta.bits))
        weights[beta] = -sum(indicator(expr, assignment) for expr, _ in card_defs)
    ordered = sorted(regions, key=lambda b: (weights[b], b.bits))
    saw_unknown = False
    for n in range(len(ordered) + 1):
        for support in itertools.combinations(ordered, n):
            r = sparse_solve(g_full, card_defs, set_vars, support, maxc=None)
            if r.is_unknown:
                saw_unknown = True
                continue
            if r.is_sat:
                model = _materialize(set_vars, regions, r.model["regions"], r.model["model"], int_vars)
                if not eval_formula(f, model):
                    raise AssertionError("internal: model fails set semantics")
                return sat(model)
    if saw_unknown:
        return unknown("integer backend hit a limit")
    return unsat()


# ---------------------------------------------------------------------------
# Brute-force oracle (bitmask enumeration; independent of the encodings)


def qfbapa_brute_force(
    f: QFFormula, maxc: int, int_lo: int = -6, int_hi: int = 6,
) -> SolveResult:
    """Enumerate every assignment of set variables to subsets of
    {0..maxc-1} and of integer variables over the grid, evaluating the
    formula directly.  The unsat verdict is conclusive only within the
    grid (callers pair it with a model check on the solver side)."""
    set_vars, int_vars = formula_variables(f)
    for masks in itertools.product(range(2**maxc), repeat=len(set_vars)):
        sets = {
            v: frozenset(i for i in range(maxc) if masks[j] >> i & 1)
            for j, v in enumerate(set_vars)
        }
        for grid in itertools.product(range(int_lo, int_hi + 1), repeat=len(int_vars)):
            m = SetModel(maxc=maxc, sets=sets, ints=dict(zip(int_vars, grid)))
            if eval_formula(f, m):
                return sat(m)
    return unsat()
