"""Combinatory array logic with cardinality constraints.

Three sorts: arrays (functions from a finite index set to component
values), indices (an uninterpreted nonempty set, variables only), and
component values.  Atoms are component-theory relations over value terms
(which may read arrays), pointwise relations over array terms, index
equalities, and cardinality comparisons over defined index sets
``{l : body}`` whose bodies are component formulas over array names.

``translate`` rewrites a formula in negation normal form into an
equisatisfiable interpreted-sets problem:

1. reads of plain arrays are abstracted into fresh shared value constants
   (a value atom keeps one read outside any store; array atoms and set
   bodies keep none); reads of constant arrays become the constant;
2. each abstracted read (x, i) is imposed by {l : x(l) = x_xi} >= {i};
3. innermost stores (plain base, read-free value) become fresh arrays;
4. each abstracted store (x, i, v) is imposed by {l : w(l) = v} >= {i}
   and {l : w(l) = x(l)} >= {i}^c;
5. a value atom anchors its defining set at its read's index singleton;
   an array atom forces its defining set to equal the index set.

Index terms become singleton set variables: a fresh marker array u_i and
the definition {l : u_i(l) = mark} with |.| = 1, where ``mark`` is one
fresh shared constant.  This encoding needs two distinct component
values; with a one-element carrier it forces |I| = 1.

The component signature must provide a binary relation ``=``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterator, Mapping

from .errors import MalformedInputError
from .formula import (
    And, App, Atom, Const, Literal, Not, Or, QFFormula, Term, Var, conj, disj,
    free_vars, symbol_size, to_nnf,
)
from .oracles import ComponentOracle
from .qfbapa import (
    Card, EMPTY, IntConst, IntDvd, IntEq, IntLe, MaxCard, PATerm, PScale, PSum,
    SCompl, SVar, SetEq, SetSub, UNIVERSE, batom, qfbapa_size,
)
from .qfbapai import QFBAPAIProblem
from .result import SolveResult, sat, unsat
from .structures import FiniteStructure, IndexCard, holds

SIZE_BOUND_FACTOR = 64  # recorded constant for the quadratic-log growth bound
MARK = "e!"             # shared constant marking singleton positions


# ---------------------------------------------------------------------------
# Terms and atoms


@dataclass(frozen=True)
class ArrayVar:
    name: str


@dataclass(frozen=True)
class ConstArray:
    const: str  # component constant, read as the constant array


@dataclass(frozen=True)
class Store:
    array: "ArrayTerm"
    index: str
    value: "ValueTerm"


@dataclass(frozen=True)
class PowApp:
    func: str
    args: tuple["ArrayTerm", ...]


ArrayTerm = ArrayVar | ConstArray | Store | PowApp


@dataclass(frozen=True)
class ValueVar:
    name: str


@dataclass(frozen=True)
class ValueConst:
    name: str  # component constant


@dataclass(frozen=True)
class Read:
    array: ArrayTerm
    index: str


@dataclass(frozen=True)
class ValApp:
    func: str
    args: tuple["ValueTerm", ...]


ValueTerm = ValueVar | ValueConst | Read | ValApp


@dataclass(frozen=True)
class ValueAtom:
    relation: str
    args: tuple[ValueTerm, ...]


@dataclass(frozen=True)
class ArrayAtom:
    relation: str
    args: tuple[ArrayTerm, ...]


@dataclass(frozen=True)
class IndexEq:
    left: str
    right: str


@dataclass(frozen=True)
class SetComp:
    """{l : body}: the body is a component formula whose variables are
    array names (their value at l), value variables, and constants."""

    body: QFFormula


@dataclass(frozen=True)
class CardAtom:
    kind: str  # "eq" | "le" | "dvd"
    left: PATerm   # over Card(SetComp(...)) leaves; no free integer variables
    right: PATerm | None = None
    divisor: int | None = None

    def __post_init__(self):
        if self.kind not in ("eq", "le", "dvd"):
            raise MalformedInputError(f"bad cardinality atom kind {self.kind!r}")
        if (self.kind == "dvd") != (self.divisor is not None):
            raise MalformedInputError("divisor exactly on dvd atoms")
        if self.kind != "dvd" and self.right is None:
            raise MalformedInputError("comparison atoms need two sides")


CALAtom = ValueAtom | ArrayAtom | IndexEq | CardAtom


def catom(a: CALAtom) -> Atom:
    return Atom(a)


# ---------------------------------------------------------------------------
# Inventories


def _walk_value(t: ValueTerm) -> Iterator[object]:
    yield t
    if isinstance(t, Read):
        yield from _walk_array(t.array)
    elif isinstance(t, ValApp):
        for a in t.args:
            yield from _walk_value(a)


def _walk_array(t: ArrayTerm) -> Iterator[object]:
    yield t
    if isinstance(t, Store):
        yield from _walk_array(t.array)
        yield from _walk_value(t.value)
    elif isinstance(t, PowApp):
        for a in t.args:
            yield from _walk_array(a)


def _walk_cal_atoms(f: QFFormula) -> Iterator[CALAtom]:
    if isinstance(f, Atom):
        yield f.literal
    elif isinstance(f, Not):
        yield from _walk_cal_atoms(f.inner)
    else:
        for p in f.parts:
            yield from _walk_cal_atoms(p)


def _card_sides(a: CardAtom):
    yield a.left
    if a.right is not None:
        yield a.right


def _card_leaves(t: PATerm) -> Iterator[PATerm]:
    yield t
    if isinstance(t, PSum):
        yield from _card_leaves(t.left)
        yield from _card_leaves(t.right)
    elif isinstance(t, PScale):
        yield from _card_leaves(t.term)


def inventory(f: QFFormula):
    """(array vars, value vars, index vars, set bodies) of a formula.

    Variables appearing only inside set bodies are classified as arrays
    (a body variable means "that array's value at the bound index").
    """
    arrays: set[str] = set()
    values: set[str] = set()
    indices: set[str] = set()
    bodies: list[QFFormula] = []

    def from_node(node):
        if isinstance(node, ArrayVar):
            arrays.add(node.name)
        elif isinstance(node, ValueVar):
            values.add(node.name)
        elif isinstance(node, (Read, Store)):
            indices.add(node.index)

    for a in _walk_cal_atoms(f):
        if isinstance(a, ValueAtom):
            for t in a.args:
                for node in _walk_value(t):
                    from_node(node)
        elif isinstance(a, ArrayAtom):
            for t in a.args:
                for node in _walk_array(t):
                    from_node(node)
        elif isinstance(a, IndexEq):
            indices.add(a.left)
            indices.add(a.right)
        else:
            for side in _card_sides(a):
                for t in _card_leaves(side):
                    if isinstance(t, Card):
                        if not isinstance(t.of, SetComp):
                            raise MalformedInputError("cardinalities range over {l : body} sets")
                        bodies.append(t.of.body)
    for body in bodies:
        arrays |= free_vars(body) - values
    return sorted(arrays), sorted(values), sorted(indices), bodies


# ---------------------------------------------------------------------------
# Translation


@dataclass
class TranslationState:
    """Bookkeeping for the rewrite rules; consumed by the size report and
    the rule-shape tests."""

    read_abs: dict = field(default_factory=dict)        # (array, index) -> value const
    write_abs: dict = field(default_factory=dict)       # (base, index, value) -> array
    singleton_sets: dict = field(default_factory=dict)  # index var -> set var
    singleton_arrays: dict = field(default_factory=dict)
    set_defs: dict = field(default_factory=dict)        # defining formula -> set var
    def_order: list = field(default_factory=list)
    side: list = field(default_factory=list)            # imposed constraints
    rounds: int = 0

    def set_var(self, body: QFFormula) -> str:
        if body not in self.set_defs:
            name = f"D{len(self.set_defs)}"
            self.set_defs[body] = name
            self.def_order.append((name, body))
        return self.set_defs[body]


def _lit(relation: str, *terms: Term) -> Atom:
    return Atom(Literal(relation, tuple(terms)))


def _pure_value(t: ValueTerm) -> bool:
    if isinstance(t, (ValueVar, ValueConst)):
        return True
    if isinstance(t, ValApp):
        return all(_pure_value(a) for a in t.args)
    return False


class _Translator:
    def __init__(self, oracle: ComponentOracle):
        if not oracle.signature().has_relation("="):
            raise MalformedInputError("the component signature must provide '='")
        self.st = TranslationState()

    # -- fresh names and their imposed constraints

    def singleton(self, index: str) -> str:
        st = self.st
        if index not in st.singleton_sets:
            sname, aname = f"I!{index}", f"u!{index}"
            st.singleton_sets[index] = sname
            st.singleton_arrays[index] = aname
            body = _lit("=", Var(aname), Var(MARK))
            st.set_defs[body] = sname
            st.def_order.append((sname, body))
            st.side.append(batom(IntEq(Card(SVar(sname)), IntConst(1))))
        return st.singleton_sets[index]

    def read_const(self, array: str, index: str) -> str:
        st = self.st
        key = (array, index)
        if key not in st.read_abs:
            name = f"r!{array}!{index}"
            st.read_abs[key] = name
            sname = st.set_var(_lit("=", Var(array), Var(name)))
            st.side.append(batom(SetSub(SVar(self.singleton(index)), SVar(sname))))
        return st.read_abs[key]

    def write_array(self, base: ArrayVar | ConstArray, index: str, value: ValueTerm) -> str:
        st = self.st
        base_key = base.name if isinstance(base, ArrayVar) else f"const:{base.const}"
        key = (base_key, index, repr(value))
        if key not in st.write_abs:
            name = f"w!{len(st.write_abs)}"
            st.write_abs[key] = name
            base_term = Var(base.name) if isinstance(base, ArrayVar) else Const(base.const)
            fresh = st.set_var(_lit("=", Var(name), self.value_term(value)))
            copy = st.set_var(_lit("=", Var(name), base_term))
            ix = self.singleton(index)
            st.side.append(batom(SetSub(SVar(ix), SVar(fresh))))
            st.side.append(batom(SetSub(SCompl(SVar(ix)), SVar(copy))))
        return st.write_abs[key]

    # -- mapping fully-abstracted terms into the component language

    def value_term(self, t: ValueTerm) -> Term:
        if isinstance(t, ValueVar):
            return Var(t.name)
        if isinstance(t, ValueConst):
            return Const(t.name)
        if isinstance(t, ValApp):
            return App(t.func, tuple(self.value_term(a) for a in t.args))
        if isinstance(t, Read) and isinstance(t.array, ArrayVar):
            return Var(t.array.name)  # the surviving read: that array at l
        raise MalformedInputError(f"unabstracted value term {t!r}")

    def array_term(self, t: ArrayTerm) -> Term:
        if isinstance(t, ArrayVar):
            return Var(t.name)
        if isinstance(t, ConstArray):
            return Const(t.const)
        if isinstance(t, PowApp):
            return App(t.func, tuple(self.array_term(a) for a in t.args))
        raise MalformedInputError(f"unabstracted array term {t!r}")

    # -- the rewrite rules

    def abstract_reads(self, t, state: dict):
        """Replace reads of plain arrays by their value constants.

        ``state['anchor']`` is the one read a value atom may keep; reads
        under a store or in zero mode always abstract.  Constant-array
        reads become the constant with no side conditions.
        """
        if isinstance(t, Read):
            if isinstance(t.array, ConstArray):
                return ValueConst(t.array.const)
            if isinstance(t.array, ArrayVar):
                key = (t.array.name, t.index)
                if state["store_depth"] == 0 and not state["zero"]:
                    if state["anchor"] is None:
                        state["anchor"] = key
                    if state["anchor"] == key and not state["kept"]:
                        state["kept"] = True
                        return t
                return ValueVar(self.read_const(*key))
            return Read(self.abstract_reads(t.array, state), t.index)
        if isinstance(t, ValApp):
            return ValApp(t.func, tuple(self.abstract_reads(a, state) for a in t.args))
        if isinstance(t, Store):
            array = self.abstract_reads(t.array, state)
            state["store_depth"] += 1
            value = self.abstract_reads(t.value, state)
            state["store_depth"] -= 1
            return Store(array, t.index, value)
        if isinstance(t, PowApp):
            return PowApp(t.func, tuple(self.abstract_reads(a, state) for a in t.args))
        return t

    def abstract_writes(self, t):
        if isinstance(t, Store):
            array = self.abstract_writes(t.array)
            value = self.abstract_writes(t.value)
            if isinstance(array, (ArrayVar, ConstArray)) and _pure_value(value):
                return ArrayVar(self.write_array(array, t.index, value))
            return Store(array, t.index, value)
        if isinstance(t, PowApp):
            return PowApp(t.func, tuple(self.abstract_writes(a) for a in t.args))
        if isinstance(t, ValApp):
            return ValApp(t.func, tuple(self.abstract_writes(a) for a in t.args))
        if isinstance(t, Read):
            return Read(self.abstract_writes(t.array), t.index)
        return t

    def fixpoint(self, args: tuple, zero: bool):
        """Apply reads-then-writes rounds until the atom stabilizes.
        Returns (rewritten args, surviving (array, index) anchor or None)."""

        def count_ops(t):
            walker = _walk_value if isinstance(t, (ValueVar, ValueConst, Read, ValApp)) else _walk_array
            return sum(1 for node in walker(t) if isinstance(node, (Read, Store)))

        anchor = None
        occurrences = sum(count_ops(a) for a in args)
        rounds = 0
        while True:
            rounds += 1
            state = {"anchor": anchor, "kept": False, "store_depth": 0, "zero": zero}
            new_args = tuple(self.abstract_reads(a, state) for a in args)
            anchor = state["anchor"]
            new_args = tuple(self.abstract_writes(a) for a in new_args)
            if new_args == args:
                break
            args = new_args
            if rounds > occurrences + 2:
                raise AssertionError("rewrite rules failed to stabilize in bound")
        # the final iteration only confirms stability
        self.st.rounds = max(self.st.rounds, rounds - 1)
        return args, anchor

    # -- atom translation

    def value_atom(self, a: ValueAtom, positive: bool) -> QFFormula:
        args, anchor = self.fixpoint(a.args, zero=False)
        body = _lit(a.relation, *[self.value_term(t) for t in args])
        sname = self.st.set_var(body)
        if anchor is None:
            return batom(SetEq(SVar(sname), UNIVERSE if positive else EMPTY))
        ix = self.singleton(anchor[1])
        target = SVar(sname) if positive else SCompl(SVar(sname))
        return batom(SetSub(SVar(ix), target))

    def array_atom(self, a: ArrayAtom, positive: bool) -> QFFormula:
        args, _ = self.fixpoint(a.args, zero=True)
        body = _lit(a.relation, *[self.array_term(t) for t in args])
        out = batom(SetEq(SVar(self.st.set_var(body)), UNIVERSE))
        return out if positive else Not(out)

    def index_eq(self, a: IndexEq, positive: bool) -> QFFormula:
        out = batom(SetEq(SVar(self.singleton(a.left)), SVar(self.singleton(a.right))))
        return out if positive else Not(out)

    def card_term(self, t: PATerm) -> PATerm:
        if isinstance(t, Card):
            if not isinstance(t.of, SetComp):
                raise MalformedInputError("cardinalities range over {l : body} sets")
            return Card(SVar(self.st.set_var(t.of.body)))
        if isinstance(t, PSum):
            return PSum(self.card_term(t.left), self.card_term(t.right))
        if isinstance(t, PScale):
            return PScale(t.factor, self.card_term(t.term))
        if isinstance(t, (IntConst, MaxCard)):
            return t
        raise MalformedInputError(f"unsupported cardinality term {t!r}")

    def card_atom(self, a: CardAtom, positive: bool) -> QFFormula:
        if a.kind == "dvd":
            out = batom(IntDvd(a.divisor, self.card_term(a.left)))
        elif a.kind == "eq":
            out = batom(IntEq(self.card_term(a.left), self.card_term(a.right)))
        else:
            out = batom(IntLe(self.card_term(a.left), self.card_term(a.right)))
        return out if positive else Not(out)

    def atom(self, a: CALAtom, positive: bool) -> QFFormula:
        if isinstance(a, ValueAtom):
            return self.value_atom(a, positive)
        if isinstance(a, ArrayAtom):
            return self.array_atom(a, positive)
        if isinstance(a, IndexEq):
            return self.index_eq(a, positive)
        if isinstance(a, CardAtom):
            return self.card_atom(a, positive)
        raise MalformedInputError(f"not an atom: {a!r}")


@dataclass
class CALTranslation:
    problem: QFBAPAIProblem
    state: TranslationState
    source: QFFormula


def translate(f: QFFormula, oracle: ComponentOracle, index_card: IndexCard) -> CALTranslation:
    """Translate a formula into an equisatisfiable interpreted-sets
    problem (the input is normalized with to_nnf first)."""
    user_arrays, user_values, _, _ = inventory(f)
    tr = _Translator(oracle)
    g = to_nnf(f)

    def walk(h: QFFormula) -> QFFormula:
        if isinstance(h, Atom):
            return tr.atom(h.literal, True)
        if isinstance(h, Not):
            inner = h.inner
            if not isinstance(inner, Atom):
                raise MalformedInputError("negation above a non-atom after NNF")
            return tr.atom(inner.literal, False)
        if isinstance(h, And):
            return conj(*[walk(p) for p in h.parts])
        return disj(*[walk(p) for p in h.parts])

    core = walk(g)
    st = tr.st
    skeleton = conj(core, *st.side)
    constants = set(user_values) | set(st.read_abs.values())
    if st.singleton_arrays:
        constants.add(MARK)
    arrays = set(user_arrays) | set(st.write_abs.values()) | set(st.singleton_arrays.values())
    for _, body in st.def_order:
        arrays |= free_vars(body) - constants
    problem = QFBAPAIProblem(
        oracle=oracle,
        index_card=index_card,
        skeleton=skeleton,
        set_vars=tuple(name for name, _ in st.def_order),
        definitions={name: body for name, body in st.def_order},
        arrays=tuple(sorted(arrays)),
        constants=tuple(sorted(constants)),
    ).validate()
    return CALTranslation(problem=problem, state=st, source=f)


# ---------------------------------------------------------------------------
# Sizes


def cal_size(f: QFFormula) -> int:
    """Symbol count: one unit per name/operator occurrence."""

    def value(t) -> int:
        if isinstance(t, (ValueVar, ValueConst)):
            return 1
        if isinstance(t, Read):
            return 2 + array(t.array)  # the read and its index
        return 1 + sum(value(a) for a in t.args)

    def array(t) -> int:
        if isinstance(t, (ArrayVar, ConstArray)):
            return 1
        if isinstance(t, Store):
            return 2 + array(t.array) + value(t.value)
        return 1 + sum(array(a) for a in t.args)

    def card(t) -> int:
        if isinstance(t, Card):
            return 1 + symbol_size(t.of.body)
        if isinstance(t, (IntConst, MaxCard)):
            return 1
        if isinstance(t, PScale):
            return 2 + card(t.term)
        return 1 + card(t.left) + card(t.right)

    def atom(a) -> int:
        if isinstance(a, ValueAtom):
            return 1 + sum(value(t) for t in a.args)
        if isinstance(a, ArrayAtom):
            return 1 + sum(array(t) for t in a.args)
        if isinstance(a, IndexEq):
            return 3
        n = 1 + card(a.left)
        if a.right is not None:
            n += card(a.right)
        if a.divisor is not None:
            n += 1
        return n

    def go(g) -> int:
        if isinstance(g, Atom):
            return atom(g.literal)
        if isinstance(g, Not):
            return 1 + go(g.inner)
        return 1 + sum(go(p) for p in g.parts)

    return go(f)


@dataclass(frozen=True)
class SizeReport:
    input_size: int
    output_size: int
    bound: int
    within: bool


def size_report(translation: CALTranslation) -> SizeReport:
    """Translated size against SIZE_BOUND_FACTOR * s^2 * log2(s + 2)."""
    s = cal_size(translation.source)
    out = qfbapa_size(translation.problem.skeleton)
    out += sum(symbol_size(body) for body in translation.problem.definitions.values())
    bound = int(SIZE_BOUND_FACTOR * s * s * math.log2(s + 2))
    return SizeReport(input_size=s, output_size=out, bound=bound, within=out <= bound)


# ---------------------------------------------------------------------------
# Direct evaluation and the brute-force oracle


def _eval_array(t: ArrayTerm, s: FiniteStructure, n: int, env: Mapping) -> tuple:
    if isinstance(t, ArrayVar):
        return env[t.name]
    if isinstance(t, ConstArray):
        return (s.constants[t.const],) * n
    if isinstance(t, Store):
        base = list(_eval_array(t.array, s, n, env))
        base[env[t.index]] = _eval_value(t.value, s, n, env)
        return tuple(base)
    if isinstance(t, PowApp):
        cols = [_eval_array(a, s, n, env) for a in t.args]
        table = s.functions[t.func]
        return tuple(table[tuple(c[r] for c in cols)] for r in range(n))
    raise MalformedInputError(f"not an array term: {t!r}")


def _eval_value(t: ValueTerm, s: FiniteStructure, n: int, env: Mapping) -> int:
    if isinstance(t, ValueVar):
        return env[t.name]
    if isinstance(t, ValueConst):
        return s.constants[t.name]
    if isinstance(t, Read):
        return _eval_array(t.array, s, n, env)[env[t.index]]
    if isinstance(t, ValApp):
        return s.functions[t.func][tuple(_eval_value(a, s, n, env) for a in t.args)]
    raise MalformedInputError(f"not a value term: {t!r}")


def eval_cal(f: QFFormula, s: FiniteStructure, n: int, env: Mapping) -> bool:
    """Direct semantics: array atoms hold pointwise at every index;
    store(a,i,v)(j) is a(j) away from i and v at i; defined sets are
    counted index by index."""

    def comp_env(r: int) -> dict:
        return {name: (v[r] if isinstance(v, tuple) else v) for name, v in env.items()}

    def card_value(t: PATerm) -> int:
        if isinstance(t, Card):
            return sum(1 for r in range(n) if holds(s, t.of.body, comp_env(r)))
        if isinstance(t, IntConst):
            return t.value
        if isinstance(t, MaxCard):
            return n
        if isinstance(t, PSum):
            return card_value(t.left) + card_value(t.right)
        if isinstance(t, PScale):
            return t.factor * card_value(t.term)
        raise MalformedInputError(f"unsupported cardinality term {t!r}")

    def atom_true(a: CALAtom) -> bool:
        if isinstance(a, ValueAtom):
            vals = tuple(_eval_value(t, s, n, env) for t in a.args)
            return vals in s.relations[a.relation]
        if isinstance(a, ArrayAtom):
            cols = [_eval_array(t, s, n, env) for t in a.args]
            rel = s.relations[a.relation]
            return all(tuple(c[r] for c in cols) in rel for r in range(n))
        if isinstance(a, IndexEq):
            return env[a.left] == env[a.right]
        if a.kind == "eq":
            return card_value(a.left) == card_value(a.right)
        if a.kind == "le":
            return card_value(a.left) <= card_value(a.right)
        return card_value(a.left) % a.divisor == 0

    def go(g: QFFormula) -> bool:
        if isinstance(g, Atom):
            return atom_true(g.literal)
        if isinstance(g, Not):
            return not go(g.inner)
        if isinstance(g, And):
            return all(go(p) for p in g.parts)
        return any(go(p) for p in g.parts)

    return go(f)


def cal_brute_force(f: QFFormula, s: FiniteStructure, n: int) -> SolveResult:
    """Enumerate array, value, and index variables; evaluate directly."""
    arrays, values, indices, _ = inventory(f)
    m = s.carrier_size
    columns = list(itertools.product(range(m), repeat=n))
    for arr_choice in itertools.product(columns, repeat=len(arrays)):
        env = dict(zip(arrays, arr_choice))
        for val_choice in itertools.product(range(m), repeat=len(values)):
            env.update(zip(values, val_choice))
            for idx_choice in itertools.product(range(n), repeat=len(indices)):
                env.update(zip(indices, idx_choice))
                if eval_cal(f, s, n, env):
                    return sat(dict(env))
    return unsat()
