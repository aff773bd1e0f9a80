"""First-order signatures, terms, and quantifier-free formulas.

This is the lingua franca of every solver in the package.  Formulas are
plain trees of ``Atom``/``Not``/``And``/``Or`` nodes; there are no
quantifiers (all variables are implicitly existential).  ``And``/``Or`` are
flattened n-ary nodes whose children are kept in a canonical structural
order so that equal formulas hash equal.

Symbol-size convention (used by every size bound in the package): one unit
per occurrence of a relation, function, constant, or variable name, plus
one unit per connective node (``Not``/``And``/``Or``).  A negated literal
inside a clause counts its negation as one connective.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

from .errors import MalformedInputError

Sort = str


@dataclass(frozen=True)
class Signature:
    """Declared sorts, constants, functions, and relations.

    ``functions`` maps name -> (argument sorts, result sort), ``relations``
    maps name -> argument sorts, ``constants`` maps name -> sort.
    """

    sorts: tuple[Sort, ...]
    constants: tuple[tuple[str, Sort], ...] = ()
    functions: tuple[tuple[str, tuple[Sort, ...], Sort], ...] = ()
    relations: tuple[tuple[str, tuple[Sort, ...]], ...] = ()

    def __post_init__(self):
        for kind, names in (
            ("constant", [n for n, _ in self.constants]),
            ("function", [n for n, _, _ in self.functions]),
            ("relation", [n for n, _ in self.relations]),
        ):
            if len(names) != len(set(names)):
                raise MalformedInputError(f"duplicate {kind} name")
        declared = set(self.sorts)
        mentioned = {s for _, s in self.constants}
        for _, args, res in self.functions:
            mentioned.update(args)
            mentioned.add(res)
        for _, args in self.relations:
            mentioned.update(args)
        if not mentioned <= declared:
            raise MalformedInputError(
                f"undeclared sorts: {sorted(mentioned - declared)}"
            )

    def constant_sort(self, name: str) -> Sort:
        for n, s in self.constants:
            if n == name:
                return s
        raise MalformedInputError(f"unknown constant {name!r}")

    def function_profile(self, name: str) -> tuple[tuple[Sort, ...], Sort]:
        for n, args, res in self.functions:
            if n == name:
                return args, res
        raise MalformedInputError(f"unknown function {name!r}")

    def relation_profile(self, name: str) -> tuple[Sort, ...]:
        for n, args in self.relations:
            if n == name:
                return args
        raise MalformedInputError(f"unknown relation {name!r}")

    def has_relation(self, name: str) -> bool:
        return any(n == name for n, _ in self.relations)


# ---------------------------------------------------------------------------
# Terms


@dataclass(frozen=True)
class Var:
    name: str
    sort: Sort = "elem"

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Const:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class App:
    func: str
    args: tuple["Term", ...]

    def __str__(self):
        return f"{self.func}({', '.join(map(str, self.args))})"


Term = Var | Const | App


def app(func: str, *args: Term) -> App:
    return App(func, tuple(args))


@dataclass(frozen=True)
class Literal:
    """A relation applied to terms, with a polarity."""

    relation: str
    args: tuple[Term, ...]
    positive: bool = True

    def negated(self) -> "Literal":
        return Literal(self.relation, self.args, not self.positive)

    def __str__(self):
        s = f"{self.relation}({', '.join(map(str, self.args))})"
        return s if self.positive else f"!{s}"


# ---------------------------------------------------------------------------
# Formulas


@dataclass(frozen=True)
class Atom:
    literal: object  # Literal, or another frozen atom payload with .negated()

    def __str__(self):
        return str(self.literal)


@dataclass(frozen=True)
class Not:
    inner: "QFFormula"

    def __str__(self):
        return f"(not {self.inner})"


@dataclass(frozen=True)
class And:
    parts: tuple["QFFormula", ...]

    def __str__(self):
        return "(and " + " ".join(map(str, self.parts)) + ")" if self.parts else "true"


@dataclass(frozen=True)
class Or:
    parts: tuple["QFFormula", ...]

    def __str__(self):
        return "(or " + " ".join(map(str, self.parts)) + ")" if self.parts else "false"


QFFormula = Atom | Not | And | Or

TRUE = And(())
FALSE = Or(())


def _canon(parts: Sequence[QFFormula]) -> tuple[QFFormula, ...]:
    # stable dedup, then structural order
    return tuple(sorted(dict.fromkeys(parts), key=repr))


def conj(*parts: QFFormula) -> QFFormula:
    """Flattening n-ary conjunction with canonical child order."""
    flat: list[QFFormula] = []
    for p in parts:
        if isinstance(p, And):
            flat.extend(p.parts)
        else:
            flat.append(p)
    out = _canon(flat)
    if len(out) == 1:
        return out[0]
    return And(out)


def disj(*parts: QFFormula) -> QFFormula:
    flat: list[QFFormula] = []
    for p in parts:
        if isinstance(p, Or):
            flat.extend(p.parts)
        else:
            flat.append(p)
    out = _canon(flat)
    if len(out) == 1:
        return out[0]
    return Or(out)


def neg(f: QFFormula) -> QFFormula:
    if isinstance(f, Not):
        return f.inner
    return Not(f)


def atom(relation: str, *args: Term) -> Atom:
    return Atom(Literal(relation, tuple(args)))


def free_vars(f: QFFormula) -> frozenset[str]:
    """Names of all variables occurring in the formula."""
    out: set[str] = set()

    def walk_term(t):
        if isinstance(t, Var):
            out.add(t.name)
        elif isinstance(t, App):
            for a in t.args:
                walk_term(a)

    def walk(g):
        if isinstance(g, Atom):
            lit = g.literal
            for a in getattr(lit, "args", ()):
                walk_term(a)
        elif isinstance(g, Not):
            walk(g.inner)
        else:
            for p in g.parts:
                walk(p)

    walk(f)
    return frozenset(out)


def rename_vars(f: QFFormula, mapping: Mapping[str, str]) -> QFFormula:
    """Rename variables; names absent from the mapping are kept."""

    def on_term(t):
        if isinstance(t, Var):
            return Var(mapping.get(t.name, t.name), t.sort)
        if isinstance(t, App):
            return App(t.func, tuple(on_term(a) for a in t.args))
        return t

    def on_formula(g):
        if isinstance(g, Atom):
            lit = g.literal
            return Atom(Literal(lit.relation, tuple(on_term(a) for a in lit.args), lit.positive))
        if isinstance(g, Not):
            return Not(on_formula(g.inner))
        if isinstance(g, And):
            return And(tuple(on_formula(p) for p in g.parts))
        return Or(tuple(on_formula(p) for p in g.parts))

    return on_formula(f)


# ---------------------------------------------------------------------------
# Normal forms


def to_nnf(f: QFFormula) -> QFFormula:
    """Push negations down to the atoms.

    The result contains ``Not`` only directly above ``Atom`` nodes and is
    logically equivalent to the input.
    """

    def pos(g: QFFormula) -> QFFormula:
        if isinstance(g, Atom):
            return g
        if isinstance(g, Not):
            return neg_(g.inner)
        if isinstance(g, And):
            return And(tuple(pos(p) for p in g.parts))
        return Or(tuple(pos(p) for p in g.parts))

    def neg_(g: QFFormula) -> QFFormula:
        if isinstance(g, Atom):
            return Not(g)
        if isinstance(g, Not):
            return pos(g.inner)
        if isinstance(g, And):
            return Or(tuple(neg_(p) for p in g.parts))
        return And(tuple(neg_(p) for p in g.parts))

    return pos(f)


@dataclass(frozen=True)
class Clause:
    """A conjunction of literals: one disjunct of a DNF."""

    literals: tuple[object, ...]

    def to_formula(self) -> QFFormula:
        parts = tuple(
            Atom(l) if l.positive else Not(Atom(l.negated())) for l in self.literals
        )
        if len(parts) == 1:
            return parts[0]
        return And(parts)

    def key(self) -> frozenset:
        return frozenset(self.literals)


def to_dnf(f: QFFormula) -> Iterator[Clause]:
    """Yield the disjuncts of a DNF of ``f``, one clause at a time.

    Clauses are produced on demand; nothing proportional to the full DNF is
    ever materialized.  Duplicate literals within a clause are dropped.
    """
    g = to_nnf(f)

    def gen(h: QFFormula) -> Iterator[tuple]:
        if isinstance(h, Atom):
            yield (h.literal,)
        elif isinstance(h, Not):
            inner = h.inner
            if not isinstance(inner, Atom):
                raise MalformedInputError("negation above a non-atom after NNF")
            yield (inner.literal.negated(),)
        elif isinstance(h, Or):
            for p in h.parts:
                yield from gen(p)
        else:  # And
            parts = h.parts

            def prod(i: int) -> Iterator[tuple]:
                if i == len(parts):
                    yield ()
                    return
                for head in gen(parts[i]):
                    for rest in prod(i + 1):
                        yield head + rest

            yield from prod(0)

    for lits in gen(g):
        yield Clause(tuple(dict.fromkeys(lits)))


# ---------------------------------------------------------------------------
# Size measure


def term_size(t: Term) -> int:
    if isinstance(t, App):
        return 1 + sum(term_size(a) for a in t.args)
    return 1


def literal_size(lit) -> int:
    n = 1 + sum(term_size(a) for a in lit.args)
    return n if lit.positive else n + 1


def symbol_size(f: QFFormula) -> int:
    """Symbol count under the package convention (see module docstring)."""
    if isinstance(f, Atom):
        lit = f.literal
        if isinstance(lit, Literal):
            return literal_size(lit)
        return getattr(lit, "size", lambda: 1)()
    if isinstance(f, Not):
        return 1 + symbol_size(f.inner)
    return 1 + sum(symbol_size(p) for p in f.parts)


def clause_size(c: Clause) -> int:
    return symbol_size(c.to_formula())


# ---------------------------------------------------------------------------
# Sort checking


def check_well_sorted(sig: Signature, f: QFFormula, var_sorts: Mapping[str, Sort] | None = None):
    """Raise MalformedInputError unless every symbol use matches ``sig``.

    ``var_sorts`` may pin variable sorts; otherwise the sort recorded on
    each ``Var`` node is trusted but must be declared.
    """

    def term_sort(t: Term) -> Sort:
        if isinstance(t, Var):
            s = var_sorts.get(t.name, t.sort) if var_sorts else t.sort
            if s not in sig.sorts:
                raise MalformedInputError(f"variable {t.name!r} has undeclared sort {s!r}")
            return s
        if isinstance(t, Const):
            return sig.constant_sort(t.name)
        args, res = sig.function_profile(t.func)
        got = tuple(term_sort(a) for a in t.args)
        if got != args:
            raise MalformedInputError(f"function {t.func!r} applied to sorts {got}")
        return res

    def walk(g: QFFormula):
        if isinstance(g, Atom):
            lit = g.literal
            if not isinstance(lit, Literal):
                raise MalformedInputError("non-relational atom in a first-order formula")
            want = sig.relation_profile(lit.relation)
            got = tuple(term_sort(a) for a in lit.args)
            if got != want:
                raise MalformedInputError(f"relation {lit.relation!r} applied to sorts {got}")
        elif isinstance(g, Not):
            walk(g.inner)
        else:
            for p in g.parts:
                walk(p)

    walk(f)
