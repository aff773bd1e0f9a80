"""Surface syntax and command-line driver.

One s-expression reader serves five logics (POWER, QFBAPA, QFBAPAI, CAL,
SKOLEM).  A script is a sequence of forms::

    (set-logic NAME)
    (declare-structure (carrier N) (const NAME V)...
                       (fun NAME ARITY ((ARGS) V)...)
                       (rel NAME ARITY (TUPLE)...))
    (declare-index-card N | inf)
    (declare-const NAME SORT)        ; SORT: elem | int | set | value |
                                     ;       index | pos
    (declare-array NAME)
    (define-set NAME (lambda (VARS) FORMULA))
    (assert FORMULA)
    (check-sat)

Formulas use prefix operators ``and or not = <= card union inter compl
store select dvd + * |`` plus the set atoms ``empty``/``universe`` and the
integer token ``MAXC``.  ``=`` and ``<=`` are overloaded by operand sort.

Commands: ``solve`` (exit 0 sat, 1 unsat, 2 unknown, 3 error),
``check-cert`` (0 accept, 1 reject, 3 error), ``translate --from cal``,
``oracle``, and ``fuzz``.
"""

from __future__ import annotations

import argparse
import signal
import sys
from dataclasses import dataclass, field

from . import cal as cl
from . import qfbapa as qb
from .errors import PowsatError, SourceError
from .formula import And, App, Atom, Const, Literal, Not, Or, QFFormula, Var, conj
from .generators import gen_cal, gen_power_instance, gen_qfbapa, gen_qfbapai, gen_skolem
from .oracles import finite_oracle, lia_oracle
from .power_solver import PartitionCertificate, PowerProblem, check_certificate, solve_power
from .qfbapa import SetModel, eval_formula, qfbapa_brute_force, qfbapa_sat
from .qfbapai import (
    QFBAPAIProblem, RegionPattern, SupportCertificate, check_certificate_qfbapai,
    qfbapai_brute_force, solve_qfbapai, witness_induced_model,
)
from .result import SAT, UNKNOWN, UNSAT, SolveResult
from .sexpr import SAtom, SList, expect_atom, expect_int, expect_list, head, parse_sexprs
from .skolem import SkolemAtom, skolem_oracle, skolem_sat, skolem_vars
from .structures import (
    Finite, FiniteStructure, PowerPoint, UNBOUNDED, brute_force_power_sat, power_holds,
)
from .formula import Signature, Clause

LOGIC_NAMES = ("POWER", "QFBAPA", "QFBAPAI", "CAL", "SKOLEM")

EXIT = {SAT: 0, UNSAT: 1, UNKNOWN: 2}
EXIT_ERROR = 3


@dataclass
class Script:
    logic: str | None = None
    structure: FiniteStructure | None = None
    index_card: object | None = None
    consts: list = field(default_factory=list)   # (name, sort)
    arrays: list = field(default_factory=list)
    set_defs: list = field(default_factory=list)  # (name, params, body)
    assertions: list = field(default_factory=list)
    check_sat: bool = False

    def const_names(self, sort: str) -> list[str]:
        return [n for n, s in self.consts if s == sort]


def _err(node, message: str):
    raise SourceError(message, getattr(node, "line", 0), getattr(node, "col", 0))


# ---------------------------------------------------------------------------
# declare-structure


def parse_structure(form: SList) -> FiniteStructure:
    carrier = None
    constants: dict[str, int] = {}
    functions: dict[str, dict] = {}
    relations: dict[str, frozenset] = {}
    f_sigs, r_sigs = [], []
    for item in form.items[1:]:
        node = expect_list(item, "a structure clause")
        kind = head(node)
        if kind == "carrier":
            carrier = expect_int(node[1], "carrier size")
        elif kind == "const":
            constants[expect_atom(node[1], "constant name")] = expect_int(node[2], "element")
        elif kind == "fun":
            name = expect_atom(node[1], "function name")
            arity = expect_int(node[2], "arity")
            table = {}
            for entry in node.items[3:]:
                e = expect_list(entry, "a table entry ((args) value)")
                args = tuple(expect_int(a, "element") for a in expect_list(e[0], "argument tuple").items)
                if len(args) != arity:
                    _err(e, f"entry arity {len(args)} != declared {arity}")
                table[args] = expect_int(e[1], "value")
            functions[name] = table
            f_sigs.append((name, ("elem",) * arity, "elem"))
        elif kind == "rel":
            name = expect_atom(node[1], "relation name")
            arity = expect_int(node[2], "arity")
            tuples = set()
            for entry in node.items[3:]:
                e = expect_list(entry, "a tuple")
                t = tuple(expect_int(a, "element") for a in e.items)
                if len(t) != arity:
                    _err(e, f"tuple arity {len(t)} != declared {arity}")
                tuples.add(t)
            relations[name] = frozenset(tuples)
            r_sigs.append((name, ("elem",) * arity))
        else:
            _err(node, f"unknown structure clause {kind!r}")
    if carrier is None:
        _err(form, "structure needs a (carrier N) clause")
    sig = Signature(
        sorts=("elem",),
        constants=tuple((n, "elem") for n in sorted(constants)),
        functions=tuple(sorted(f_sigs)),
        relations=tuple(sorted(r_sigs)),
    )
    return FiniteStructure(
        signature=sig, carrier_size=carrier, constants=constants,
        functions=functions, relations=relations,
    ).validate()


def structure_form(s: FiniteStructure) -> str:
    parts = [f"(carrier {s.carrier_size})"]
    for name in sorted(s.constants):
        parts.append(f"(const {name} {s.constants[name]})")
    for name in sorted(s.functions):
        table = s.functions[name]
        arity = len(next(iter(table), ()))
        entries = " ".join(
            f"(({' '.join(map(str, args))}) {v})" for args, v in sorted(table.items())
        )
        parts.append(f"(fun {name} {arity} {entries})".rstrip())
    for name in sorted(s.relations):
        tuples = s.relations[name]
        arity = len(next(iter(tuples), ())) if tuples else len(s.signature.relation_profile(name))
        entries = " ".join(f"({' '.join(map(str, t))})" for t in sorted(tuples))
        body = f"(rel {name} {arity} {entries})" if entries else f"(rel {name} {arity})"
        parts.append(body)
    return "(declare-structure " + " ".join(parts) + ")"


# ---------------------------------------------------------------------------
# component formulas (POWER bodies, QFBAPAI definitions, CAL set bodies)


BOOL_OPS = ("and", "or", "not")


def parse_component_term(node, variables: set, s: FiniteStructure | None):
    if isinstance(node, SAtom):
        name = node.text
        if name in variables:
            return Var(name)
        if s is not None and name in s.constants:
            return Const(name)
        if s is None:
            try:
                int(name)
                return Const(name)
            except ValueError:
                pass
            return Var(name)  # arithmetic variables need no declaration inside terms
        _err(node, f"unknown term symbol {name!r}")
    node = expect_list(node, "a term")
    op = head(node)
    if s is not None and op in s.functions:
        return App(op, tuple(parse_component_term(a, variables, s) for a in node.items[1:]))
    if s is None and op == "+":
        args = [parse_component_term(a, variables, s) for a in node.items[1:]]
        out = args[0]
        for a in args[1:]:
            out = App("+", (out, a))
        return out
    _err(node, f"unknown function {op!r}")


def parse_component_formula(node, variables: set, s: FiniteStructure | None) -> QFFormula:
    if isinstance(node, SAtom):
        _err(node, "expected a formula")
    node = expect_list(node, "a formula")
    op = head(node)
    if op == "and":
        return And(tuple(parse_component_formula(a, variables, s) for a in node.items[1:]))
    if op == "or":
        return Or(tuple(parse_component_formula(a, variables, s) for a in node.items[1:]))
    if op == "not":
        return Not(parse_component_formula(node[1], variables, s))
    relations = set(s.relations) if s is not None else {"=", "<="}
    if op in relations:
        args = tuple(parse_component_term(a, variables, s) for a in node.items[1:])
        return Atom(Literal(op, args))
    _err(node, f"unknown relation {op!r}")


def print_component_term(t) -> str:
    if isinstance(t, (Var, Const)):
        return t.name
    if isinstance(t, App):
        return "(" + t.func + " " + " ".join(print_component_term(a) for a in t.args) + ")"
    raise PowsatError(f"unprintable term {t!r}")


def print_component_formula(f: QFFormula) -> str:
    if isinstance(f, Atom):
        lit = f.literal
        body = "(" + lit.relation + " " + " ".join(print_component_term(a) for a in lit.args) + ")"
        return body if lit.positive else f"(not {body})"
    if isinstance(f, Not):
        return f"(not {print_component_formula(f.inner)})"
    if isinstance(f, And):
        return "(and " + " ".join(print_component_formula(p) for p in f.parts) + ")" \
            if f.parts else "(and)"
    return "(or " + " ".join(print_component_formula(p) for p in f.parts) + ")" \
        if f.parts else "(or)"


# ---------------------------------------------------------------------------
# QFBAPA formulas


SET_HEADS = ("union", "inter", "compl")


def _looks_set(node, set_vars: set) -> bool:
    if isinstance(node, SAtom):
        return node.text in set_vars or node.text in ("empty", "universe")
    return head(node) in SET_HEADS


def parse_set_expr(node, set_vars: set):
    # names in set positions need no declaration: the position disambiguates
    if isinstance(node, SAtom):
        if node.text == "empty":
            return qb.EMPTY
        if node.text == "universe":
            return qb.UNIVERSE
        return qb.SVar(node.text)
    node = expect_list(node, "a set expression")
    op = head(node)
    if op == "union":
        return qb.SUnion(parse_set_expr(node[1], set_vars), parse_set_expr(node[2], set_vars))
    if op == "inter":
        return qb.SInter(parse_set_expr(node[1], set_vars), parse_set_expr(node[2], set_vars))
    if op == "compl":
        return qb.SCompl(parse_set_expr(node[1], set_vars))
    _err(node, f"unknown set operator {op!r}")


def parse_pa_term(node, set_vars: set, int_vars: set, card_sets=None):
    if isinstance(node, SAtom):
        if node.text == "MAXC":
            return qb.MAXC
        if node.text in int_vars:
            return qb.IntVar(node.text)
        try:
            return qb.IntConst(int(node.text))
        except ValueError:
            _err(node, f"unknown arithmetic symbol {node.text!r}")
    node = expect_list(node, "an arithmetic term")
    op = head(node)
    if op == "card":
        if card_sets is not None:
            name = expect_atom(node[1], "a defined set name")
            if name not in card_sets:
                _err(node, f"undefined set {name!r}")
            return qb.Card(card_sets[name])
        return qb.Card(parse_set_expr(node[1], set_vars))
    if op == "+":
        args = [parse_pa_term(a, set_vars, int_vars, card_sets) for a in node.items[1:]]
        out = args[0]
        for a in args[1:]:
            out = qb.PSum(out, a)
        return out
    if op == "*":
        k = expect_int(node[1], "a scale constant")
        return qb.PScale(k, parse_pa_term(node[2], set_vars, int_vars, card_sets))
    _err(node, f"unknown arithmetic operator {op!r}")


def parse_qfbapa_formula(node, set_vars: set, int_vars: set) -> QFFormula:
    node = expect_list(node, "a formula")
    op = head(node)
    if op == "and":
        return And(tuple(parse_qfbapa_formula(a, set_vars, int_vars) for a in node.items[1:]))
    if op == "or":
        return Or(tuple(parse_qfbapa_formula(a, set_vars, int_vars) for a in node.items[1:]))
    if op == "not":
        return Not(parse_qfbapa_formula(node[1], set_vars, int_vars))
    if op in ("=", "<="):
        l, r = node[1], node[2]
        if _looks_set(l, set_vars) or _looks_set(r, set_vars):
            le = parse_set_expr(l, set_vars)
            re = parse_set_expr(r, set_vars)
            return qb.batom(qb.SetEq(le, re) if op == "=" else qb.SetSub(le, re))
        lt = parse_pa_term(l, set_vars, int_vars)
        rt = parse_pa_term(r, set_vars, int_vars)
        return qb.batom(qb.IntEq(lt, rt) if op == "=" else qb.IntLe(lt, rt))
    if op == "dvd":
        k = expect_int(node[1], "a divisor")
        return qb.batom(qb.IntDvd(k, parse_pa_term(node[2], set_vars, int_vars)))
    _err(node, f"unknown operator {op!r}")


def print_set_expr(e) -> str:
    if isinstance(e, qb.SVar):
        return e.name
    if isinstance(e, qb.EmptySet):
        return "empty"
    if isinstance(e, qb.UniverseSet):
        return "universe"
    if isinstance(e, qb.SUnion):
        return f"(union {print_set_expr(e.left)} {print_set_expr(e.right)})"
    if isinstance(e, qb.SInter):
        return f"(inter {print_set_expr(e.left)} {print_set_expr(e.right)})"
    return f"(compl {print_set_expr(e.inner)})"


def print_pa_term(t, set_name_of=None) -> str:
    if isinstance(t, qb.IntVar):
        return t.name
    if isinstance(t, qb.IntConst):
        return str(t.value)
    if isinstance(t, qb.MaxCard):
        return "MAXC"
    if isinstance(t, qb.Card):
        if set_name_of is not None:
            return f"(card {set_name_of(t.of)})"
        return f"(card {print_set_expr(t.of)})"
    if isinstance(t, qb.PSum):
        return f"(+ {print_pa_term(t.left, set_name_of)} {print_pa_term(t.right, set_name_of)})"
    return f"(* {t.factor} {print_pa_term(t.term, set_name_of)})"


def print_qfbapa_formula(f, set_name_of=None) -> str:
    if isinstance(f, Atom):
        a = f.literal
        if isinstance(a, qb.SetEq):
            return f"(= {print_set_expr(a.left)} {print_set_expr(a.right)})"
        if isinstance(a, qb.SetSub):
            return f"(<= {print_set_expr(a.left)} {print_set_expr(a.right)})"
        if isinstance(a, qb.IntEq):
            return f"(= {print_pa_term(a.left, set_name_of)} {print_pa_term(a.right, set_name_of)})"
        if isinstance(a, qb.IntLe):
            return f"(<= {print_pa_term(a.left, set_name_of)} {print_pa_term(a.right, set_name_of)})"
        return f"(dvd {a.divisor} {print_pa_term(a.term, set_name_of)})"
    if isinstance(f, Not):
        return f"(not {print_qfbapa_formula(f.inner, set_name_of)})"
    if isinstance(f, And):
        return "(and " + " ".join(print_qfbapa_formula(p, set_name_of) for p in f.parts) + ")" \
            if f.parts else "(and)"
    return "(or " + " ".join(print_qfbapa_formula(p, set_name_of) for p in f.parts) + ")" \
        if f.parts else "(or)"


# ---------------------------------------------------------------------------
# CAL formulas


def parse_cal_value_term(node, script: Script):
    s = script.structure
    arrays = set(script.arrays)
    values = set(script.const_names("value"))
    if isinstance(node, SAtom):
        name = node.text
        if name in values:
            return cl.ValueVar(name)
        if name in s.constants:
            return cl.ValueConst(name)
        _err(node, f"unknown value symbol {name!r}")
    node = expect_list(node, "a value term")
    op = head(node)
    if op == "select":
        return cl.Read(parse_cal_array_term(node[1], script),
                       _cal_index(node[2], script))
    if op in s.functions:
        return cl.ValApp(op, tuple(parse_cal_value_term(a, script) for a in node.items[1:]))
    _err(node, f"unknown value operator {op!r}")


def _cal_index(node, script: Script) -> str:
    name = expect_atom(node, "an index variable")
    if name not in script.const_names("index"):
        _err(node, f"{name!r} is not a declared index variable")
    return name


def parse_cal_array_term(node, script: Script):
    if isinstance(node, SAtom):
        if node.text in script.arrays:
            return cl.ArrayVar(node.text)
        _err(node, f"unknown array {node.text!r}")
    node = expect_list(node, "an array term")
    op = head(node)
    if op == "store":
        return cl.Store(parse_cal_array_term(node[1], script),
                        _cal_index(node[2], script),
                        parse_cal_value_term(node[3], script))
    if op == "constarr":
        name = expect_atom(node[1], "a component constant")
        if name not in script.structure.constants:
            _err(node, f"{name!r} is not a component constant")
        return cl.ConstArray(name)
    _err(node, f"unknown array operator {op!r}")


def _is_cal_array(node, script: Script) -> bool:
    if isinstance(node, SAtom):
        return node.text in script.arrays
    return head(node) in ("store", "constarr")


def _is_cal_index(node, script: Script) -> bool:
    return isinstance(node, SAtom) and node.text in script.const_names("index")


def _is_card_side(node) -> bool:
    if isinstance(node, SAtom):
        if node.text == "MAXC":
            return True
        try:
            int(node.text)
            return True
        except ValueError:
            return False
    return head(node) in ("card", "+", "*")


def parse_cal_card_term(node, script: Script, comp_sets: dict):
    if isinstance(node, SAtom):
        if node.text == "MAXC":
            return qb.MAXC
        return qb.IntConst(expect_int(node, "an integer"))
    node = expect_list(node, "a cardinality term")
    op = head(node)
    if op == "card":
        name = expect_atom(node[1], "a defined set name")
        if name not in comp_sets:
            _err(node, f"undefined set {name!r}")
        return qb.Card(cl.SetComp(comp_sets[name]))
    if op == "+":
        args = [parse_cal_card_term(a, script, comp_sets) for a in node.items[1:]]
        out = args[0]
        for a in args[1:]:
            out = qb.PSum(out, a)
        return out
    if op == "*":
        return qb.PScale(expect_int(node[1], "a scale constant"),
                         parse_cal_card_term(node[2], script, comp_sets))
    _err(node, f"unknown cardinality operator {op!r}")


def parse_cal_formula(node, script: Script, comp_sets: dict) -> QFFormula:
    node = expect_list(node, "a formula")
    op = head(node)
    if op == "and":
        return And(tuple(parse_cal_formula(a, script, comp_sets) for a in node.items[1:]))
    if op == "or":
        return Or(tuple(parse_cal_formula(a, script, comp_sets) for a in node.items[1:]))
    if op == "not":
        return Not(parse_cal_formula(node[1], script, comp_sets))
    if op == "dvd":
        return cl.catom(cl.CardAtom(
            "dvd", parse_cal_card_term(node[2], script, comp_sets),
            divisor=expect_int(node[1], "a divisor"),
        ))
    s = script.structure
    if op in ("=", "<=") or op in s.relations:
        args = node.items[1:]
        if op in ("=", "<=") and any(_is_card_side(a) for a in args):
            l, r = (parse_cal_card_term(a, script, comp_sets) for a in args)
            return cl.catom(cl.CardAtom("eq" if op == "=" else "le", l, r))
        if op == "=" and len(args) == 2 and all(_is_cal_index(a, script) for a in args):
            return cl.catom(cl.IndexEq(args[0].text, args[1].text))
        if all(_is_cal_array(a, script) for a in args):
            return cl.catom(cl.ArrayAtom(op, tuple(parse_cal_array_term(a, script) for a in args)))
        return cl.catom(cl.ValueAtom(op, tuple(parse_cal_value_term(a, script) for a in args)))
    _err(node, f"unknown operator {op!r}")


def print_cal_value_term(t) -> str:
    if isinstance(t, cl.ValueVar):
        return t.name
    if isinstance(t, cl.ValueConst):
        return t.name
    if isinstance(t, cl.Read):
        return f"(select {print_cal_array_term(t.array)} {t.index})"
    return "(" + t.func + " " + " ".join(print_cal_value_term(a) for a in t.args) + ")"


def print_cal_array_term(t) -> str:
    if isinstance(t, cl.ArrayVar):
        return t.name
    if isinstance(t, cl.ConstArray):
        return f"(constarr {t.const})"
    if isinstance(t, cl.Store):
        return f"(store {print_cal_array_term(t.array)} {t.index} {print_cal_value_term(t.value)})"
    return "(" + t.func + " " + " ".join(print_cal_array_term(a) for a in t.args) + ")"


class _CalPrinter:
    """Prints a CAL formula, assigning names to set comprehensions."""

    def __init__(self):
        self.sets: dict = {}

    def set_name(self, comp: cl.SetComp) -> str:
        if comp.body not in self.sets:
            self.sets[comp.body] = f"Z{len(self.sets)}"
        return self.sets[comp.body]

    def card_term(self, t) -> str:
        if isinstance(t, qb.Card):
            return f"(card {self.set_name(t.of)})"
        if isinstance(t, qb.IntConst):
            return str(t.value)
        if isinstance(t, qb.MaxCard):
            return "MAXC"
        if isinstance(t, qb.PSum):
            return f"(+ {self.card_term(t.left)} {self.card_term(t.right)})"
        return f"(* {t.factor} {self.card_term(t.term)})"

    def formula(self, f) -> str:
        if isinstance(f, Atom):
            a = f.literal
            if isinstance(a, cl.ValueAtom):
                return "(" + a.relation + " " + " ".join(print_cal_value_term(t) for t in a.args) + ")"
            if isinstance(a, cl.ArrayAtom):
                return "(" + a.relation + " " + " ".join(print_cal_array_term(t) for t in a.args) + ")"
            if isinstance(a, cl.IndexEq):
                return f"(= {a.left} {a.right})"
            if a.kind == "dvd":
                return f"(dvd {a.divisor} {self.card_term(a.left)})"
            op = "=" if a.kind == "eq" else "<="
            return f"({op} {self.card_term(a.left)} {self.card_term(a.right)})"
        if isinstance(f, Not):
            return f"(not {self.formula(f.inner)})"
        if isinstance(f, And):
            return "(and " + " ".join(self.formula(p) for p in f.parts) + ")" if f.parts else "(and)"
        return "(or " + " ".join(self.formula(p) for p in f.parts) + ")" if f.parts else "(or)"


# ---------------------------------------------------------------------------
# SKOLEM formulas


def parse_monomial(node, variables: set) -> tuple[str, ...]:
    if isinstance(node, SAtom):
        if node.text in variables:
            return (node.text,)
        _err(node, f"unknown variable {node.text!r}")
    node = expect_list(node, "a monomial")
    if head(node) != "*":
        _err(node, "monomials use (* ...)")
    out: list[str] = []
    for a in node.items[1:]:
        out.extend(parse_monomial(a, variables))
    return tuple(sorted(out))


def parse_skolem_formula(node, variables: set) -> QFFormula:
    node = expect_list(node, "a formula")
    op = head(node)
    if op == "and":
        return And(tuple(parse_skolem_formula(a, variables) for a in node.items[1:]))
    if op == "or":
        return Or(tuple(parse_skolem_formula(a, variables) for a in node.items[1:]))
    if op == "not":
        return Not(parse_skolem_formula(node[1], variables))
    if op in ("=", "|"):
        l = parse_monomial(node[1], variables)
        r = parse_monomial(node[2], variables)
        return Atom(SkolemAtom(l, r, divides=op == "|"))
    _err(node, f"unknown operator {op!r}")


def print_monomial(m: tuple[str, ...]) -> str:
    if len(m) == 1:
        return m[0]
    return "(* " + " ".join(m) + ")"


def print_skolem_formula(f) -> str:
    if isinstance(f, Atom):
        a = f.literal
        op = "|" if a.divides else "="
        return f"({op} {print_monomial(a.left)} {print_monomial(a.right)})"
    if isinstance(f, Not):
        return f"(not {print_skolem_formula(f.inner)})"
    if isinstance(f, And):
        return "(and " + " ".join(print_skolem_formula(p) for p in f.parts) + ")" if f.parts else "(and)"
    return "(or " + " ".join(print_skolem_formula(p) for p in f.parts) + ")" if f.parts else "(or)"


# ---------------------------------------------------------------------------
# Scripts


def parse(text: str) -> Script:
    script = Script()
    comp_sets: dict = {}
    for form in parse_sexprs(text):
        form = expect_list(form, "a top-level form")
        op = head(form)
        if op == "set-logic":
            if script.logic is not None:
                _err(form, "exactly one set-logic per script")
            name = expect_atom(form[1], "a logic name")
            if name not in LOGIC_NAMES:
                _err(form[1], f"unknown logic {name!r}; expected one of {', '.join(LOGIC_NAMES)}")
            script.logic = name
            continue
        if op == "declare-structure":
            script.structure = parse_structure(form)
            continue
        if op == "declare-index-card":
            raw = expect_atom(form[1], "an index cardinality")
            if raw == "inf":
                script.index_card = UNBOUNDED
            else:
                value = expect_int(form[1], "an index cardinality")
                if value < 0:
                    _err(form[1], "index cardinality must be nonnegative")
                script.index_card = value
            continue
        if op == "declare-const":
            script.consts.append(
                (expect_atom(form[1], "a name"), expect_atom(form[2], "a sort"))
            )
            continue
        if op == "declare-array":
            script.arrays.append(expect_atom(form[1], "an array name"))
            continue
        if script.logic is None:
            _err(form, "set-logic must come first")
        if op == "define-set":
            name = expect_atom(form[1], "a set name")
            lam = expect_list(form[2], "(lambda (vars) body)")
            if head(lam) != "lambda":
                _err(lam, "define-set takes a lambda")
            params = tuple(expect_atom(a, "a parameter") for a in expect_list(lam[1], "parameters").items)
            if script.logic == "CAL":
                body = _parse_cal_set_body(lam[2], params, script)
            else:
                variables = set(params) | set(script.const_names("elem")) | set(script.const_names("int"))
                body = parse_component_formula(lam[2], variables, script.structure)
            script.set_defs.append((name, params, body))
            comp_sets[name] = body
            continue
        if op == "assert":
            script.assertions.append(_parse_assertion(form[1], script, comp_sets))
            continue
        if op == "check-sat":
            script.check_sat = True
            continue
        _err(form, f"unknown form {op!r}")
    if script.logic is None:
        raise SourceError("script has no set-logic", 1, 1)
    return script


def _parse_cal_set_body(node, params, script: Script) -> QFFormula:
    """The comprehension binder applies arrays: (select a l) inside the
    body means array a at the bound index and becomes the variable a."""
    if len(params) != 1:
        _err(node, "set bodies bind exactly one index variable")
    binder = params[0]
    s = script.structure

    def term(nd):
        if isinstance(nd, SAtom):
            name = nd.text
            if name in script.const_names("value"):
                return Var(name)
            if name in s.constants:
                return Const(name)
            _err(nd, f"unknown symbol {name!r} in a set body")
        nd = expect_list(nd, "a term")
        op = head(nd)
        if op == "select":
            arr = expect_atom(nd[1], "an array name")
            if arr not in script.arrays:
                _err(nd, f"unknown array {arr!r}")
            if expect_atom(nd[2], "the bound variable") != binder:
                _err(nd, f"reads in set bodies use the bound variable {binder!r}")
            return Var(arr)
        if op in s.functions:
            return App(op, tuple(term(a) for a in nd.items[1:]))
        _err(nd, f"unknown function {op!r}")

    def formula(nd):
        nd2 = expect_list(nd, "a formula")
        op = head(nd2)
        if op == "and":
            return And(tuple(formula(a) for a in nd2.items[1:]))
        if op == "or":
            return Or(tuple(formula(a) for a in nd2.items[1:]))
        if op == "not":
            return Not(formula(nd2[1]))
        if op in s.relations:
            return Atom(Literal(op, tuple(term(a) for a in nd2.items[1:])))
        _err(nd2, f"unknown relation {op!r}")

    return formula(node)


def _parse_assertion(node, script: Script, comp_sets: dict):
    logic = script.logic
    if logic == "POWER":
        if script.structure is None:
            _err(node, "POWER needs a declare-structure")
        variables = set(script.const_names("elem"))
        return parse_component_formula(node, variables, script.structure)
    if logic == "SKOLEM":
        return parse_skolem_formula(node, set(script.const_names("pos")))
    if logic == "QFBAPA":
        return parse_qfbapa_formula(node, set(script.const_names("set")),
                                    set(script.const_names("int")))
    if logic == "QFBAPAI":
        set_vars = {name for name, _, _ in script.set_defs}
        return parse_qfbapa_formula(node, set_vars, set(script.const_names("int")))
    if logic == "CAL":
        if script.structure is None:
            _err(node, "CAL needs a declare-structure")
        return parse_cal_formula(node, script, comp_sets)
    _err(node, f"logic {logic!r} missing an assertion parser")


# ---------------------------------------------------------------------------
# Problems, solving, models


def build_problem(script: Script):
    logic = script.logic
    formula = conj(*script.assertions) if script.assertions else And(())
    if logic == "POWER":
        if script.structure is None or script.index_card is None:
            raise SourceError("POWER needs declare-structure and declare-index-card", 1, 1)
        card = script.index_card if script.index_card is UNBOUNDED else Finite(script.index_card)
        return PowerProblem(finite_oracle(script.structure), card, formula)
    if logic == "SKOLEM":
        return formula
    if logic == "QFBAPA":
        if script.index_card is UNBOUNDED:
            raise SourceError("finite universes only; omit declare-index-card for a symbolic size", 1, 1)
        return (formula, script.index_card)
    if logic == "QFBAPAI":
        if not isinstance(script.index_card, int):
            raise SourceError("QFBAPAI needs a finite declare-index-card", 1, 1)
        oracle = finite_oracle(script.structure) if script.structure else lia_oracle()
        set_vars = tuple(name for name, _, _ in script.set_defs)
        definitions = {name: body for name, _, body in script.set_defs}
        arrays = tuple(script.arrays)
        for name, params, _ in script.set_defs:
            for q in params:
                if q not in arrays:
                    raise SourceError(f"set parameter {q!r} is not a declared array", 1, 1)
        return QFBAPAIProblem(
            oracle=oracle, index_card=Finite(script.index_card), skeleton=formula,
            set_vars=set_vars, definitions=definitions, arrays=arrays,
            constants=tuple(script.const_names("elem")),
        ).validate()
    if logic == "CAL":
        if script.structure is None or not isinstance(script.index_card, int):
            raise SourceError("CAL needs declare-structure and a finite declare-index-card", 1, 1)
        return (formula, script.structure, Finite(script.index_card))
    raise SourceError(f"logic {logic!r} missing a problem builder", 1, 1)


def _print_vec(values) -> str:
    return "(vec " + " ".join(str(v) for v in values) + ")"


def _model_lines(script: Script, result: SolveResult, problem) -> list[str]:
    if not result.is_sat:
        return []
    logic = script.logic
    if logic == "POWER":
        card = script.index_card
        entries = []
        if isinstance(card, int):
            for v, vec in sorted(result.model.vectors(card).items()):
                entries.append(f"({v} {_print_vec(vec)})")
        else:
            exc = dict(result.model.exceptions)
            for v, d in sorted(result.model.default.items()):
                ats = " ".join(f"(at {i} {m[v]})" for i, m in sorted(exc.items()))
                entries.append(f"({v} (default {d}{' ' + ats if ats else ''}))")
        return ["(model " + " ".join(entries) + ")"]
    if logic == "SKOLEM":
        entries = [f"({v} {result.model[v]})" for v in sorted(result.model)]
        return ["(model " + " ".join(entries) + ")"]
    if logic == "QFBAPA":
        m: SetModel = result.model
        entries = [f"(maxc {m.maxc})"]
        for name in sorted(m.sets):
            inner = " ".join(map(str, sorted(m.sets[name])))
            entries.append(f"({name} ({inner}))")
        for name in sorted(m.ints):
            entries.append(f"({name} {m.ints[name]})")
        return ["(model " + " ".join(entries) + ")"]
    if logic == "QFBAPAI":
        w = result.model
        entries = [f"({c} {w.constants[c]})" for c in sorted(w.constants)]
        entries += [f"({a} {_print_vec(w.arrays[a])})" for a in sorted(w.arrays)]
        return ["(model " + " ".join(entries) + ")"]
    if logic == "CAL":
        w, translation = result.model
        entries = []
        user_arrays, user_values, user_indices, _ = cl.inventory(translation.source)
        for a in sorted(user_arrays):
            entries.append(f"({a} {_print_vec(w.arrays[a])})")
        for v in sorted(user_values):
            entries.append(f"({v} {w.constants[v]})")
        mark = w.constants.get(cl.MARK)
        for i in sorted(user_indices):
            u = w.arrays.get(f"u!{i}")
            if u is not None and mark is not None and mark in u:
                entries.append(f"({i} {u.index(mark)})")
        return ["(model " + " ".join(entries) + ")"]
    return []


def solve_script(script: Script) -> tuple[SolveResult, object]:
    problem = build_problem(script)
    logic = script.logic
    if logic == "POWER":
        return solve_power(problem), problem
    if logic == "SKOLEM":
        return skolem_sat(problem), problem
    if logic == "QFBAPA":
        formula, maxc = problem
        return qfbapa_sat(formula, maxc=maxc), problem
    if logic == "QFBAPAI":
        return solve_qfbapai(problem), problem
    if logic == "CAL":
        formula, structure, card = problem
        translation = cl.translate(formula, finite_oracle(structure), card)
        r = solve_qfbapai(translation.problem)
        if r.is_sat:
            r = SolveResult(SAT, model=(r.model, translation), certificate=r.certificate)
        return r, translation
    raise PowsatError(f"no solver for {logic!r}")


# ---------------------------------------------------------------------------
# Certificates


def print_term(t) -> str:
    return print_component_term(t)


def certificate_text(script: Script, result: SolveResult) -> str | None:
    cert = result.certificate
    if cert is None:
        return None
    if isinstance(cert, PartitionCertificate):
        lits = " ".join(
            f"({'+' if l.positive else '-'} {l.relation} "
            + " ".join(print_term(a) for a in l.args) + ")"
            for l in cert.clause.literals
        )
        parts = " ".join("(" + " ".join(map(str, p)) + ")" for p in cert.partition)
        model0 = " ".join(f"({v} {cert.model0[v]})" for v in sorted(cert.model0))
        models = " ".join(
            "(" + " ".join(f"({v} {m[v]})" for v in sorted(m)) + ")"
            for m in cert.part_models
        )
        return (f"(certificate power (clause {lits}) (partition {parts}) "
                f"(model0 {model0}) (models {models}))")
    if isinstance(cert, tuple) and len(cert) == 2 and isinstance(cert[1], PartitionCertificate):
        # skolem: (power model, partition certificate) over the additive form
        inner = SolveResult(SAT, model=cert[0], certificate=cert[1])
        return certificate_text(script, inner)
    if isinstance(cert, SupportCertificate):
        regions = " ".join("(" + " ".join(map(str, b.bits)) + ")" for b in cert.regions)
        comp = " ".join(f"({v} {cert.component_model[v]})" for v in sorted(cert.component_model))
        m = cert.set_model
        sets = " ".join(
        
            f"({name} ({' '.join(map(str, sorted(m.sets[name])))}))"
            for name in sorted(m.sets)
        )
        ints = " ".join(f"({v} {m.ints[v]})" for v in sorted(m.ints))
        return (f"(certificate qfbapai (regions {regions}) (bit {cert.cover_bit}) "
                f"(component-model {comp}) "
                f"(set-model (maxc {m.maxc}) (ints {ints}) (sets {sets})))")
    return None


def _parse_model_pairs(node, structure: FiniteStructure | None) -> dict:
    out = {}
    for pair in node.items[1:]:
        p = expect_list(pair, "(name value)")
        out[expect_atom(p[0], "a name")] = expect_int(p[1], "a value")
    return out


def parse_certificate(text: str, script: Script):
    forms = parse_sexprs(text)
    if len(forms) != 1:
        raise SourceError("expected one (certificate ...) form", 1, 1)
    form = expect_list(forms[0], "a certificate")
    if head(form) != "certificate":
        _err(form, "expected (certificate ...)")
    kind = expect_atom(form[1], "a certificate kind")
    sections = {head(x): x for x in form.items[2:]}
    if kind == "power":
        lits = []
        for l in expect_list(sections["clause"], "clause").items[1:]:
            node = expect_list(l, "a literal")
            polarity = expect_atom(node[0], "+ or -") == "+"
            rel = expect_atom(node[1], "a relation")
            variables = set(script.const_names("elem")) | set(script.const_names("pos"))
            args = tuple(
                parse_component_term(a, variables, script.structure) for a in node.items[2:]
            )
            lits.append(Literal(rel, args, polarity))
        partition = tuple(
            tuple(expect_int(i, "an index") for i in expect_list(p, "a part").items)
            for p in expect_list(sections["partition"], "partition").items[1:]
        )
        model0 = _parse_model_pairs(sections["model0"], script.structure)
        models = tuple(
            {expect_atom(q[0], "name"): expect_int(q[1], "value")
             for q in (expect_list(x, "(name value)") for x in expect_list(m, "a model").items)}
            for m in expect_list(sections["models"], "models").items[1:]
        )
        return PartitionCertificate(Clause(tuple(lits)), partition, model0, models)
    if kind == "qfbapai":
        regions = tuple(
            RegionPattern(tuple(expect_int(b, "a bit") for b in expect_list(r, "bits").items))
            for r in expect_list(sections["regions"], "regions").items[1:]
        )
        bit = expect_int(expect_list(sections["bit"], "bit")[1], "the cover bit")
        comp = _parse_model_pairs(sections["component-model"], script.structure)
        sm = expect_list(sections["set-model"], "set-model")
        maxc, ints, sets = 0, {}, {}
        for part in sm.items[1:]:
            p = expect_list(part, "a set-model clause")
            k = head(p)
            if k == "maxc":
                maxc = expect_int(p[1], "maxc")
            elif k == "ints":
                ints = _parse_model_pairs(p, script.structure)
            elif k == "sets":
                for entry in p.items[1:]:
                    e = expect_list(entry, "(name (indices))")
                    name = expect_atom(e[0], "a set name")
                    sets[name] = frozenset(
                        expect_int(i, "an index") for i in expect_list(e[1], "indices").items
                    )
        return SupportCertificate(regions, bit, comp, SetModel(maxc=maxc, sets=sets, ints=ints))
    raise SourceError(f"unknown certificate kind {kind!r}", form.line, form.col)


def check_script_certificate(script: Script, cert_text: str):
    cert = parse_certificate(cert_text, script)
    problem = build_problem(script)
    if script.logic == "POWER":
        return check_certificate(problem, cert)
    if script.logic == "QFBAPAI":
        return check_certificate_qfbapai(problem, cert)
    if script.logic == "CAL":
        formula, structure, card = problem
        translation = cl.translate(formula, finite_oracle(structure), card)
        return check_certificate_qfbapai(translation.problem, cert)
    raise SourceError(f"no certificate checker for {script.logic}", 1, 1)


# ---------------------------------------------------------------------------
# Instance serialization (fuzz repro files, translate output)


def power_script_text(s, n, f, variables) -> str:
    lines = ["(set-logic POWER)", structure_form(s), f"(declare-index-card {n})"]
    for v in variables:
        lines.append(f"(declare-const {v} elem)")
    lines.append(f"(assert {print_component_formula(f)})")
    lines.append("(check-sat)")
    return "\n".join(lines)


def qfbapa_script_text(f, maxc) -> str:
    from .qfbapa import formula_variables

    set_vars, int_vars = formula_variables(f)
    lines = ["(set-logic QFBAPA)"]
    if maxc is not None:
        lines.append(f"(declare-index-card {maxc})")
    for v in set_vars:
        lines.append(f"(declare-const {v} set)")
    for v in int_vars:
        lines.append(f"(declare-const {v} int)")
    lines.append(f"(assert {print_qfbapa_formula(f)})")
    lines.append("(check-sat)")
    return "\n".join(lines)


def qfbapai_script_text(p: QFBAPAIProblem) -> str:
    from .oracles import FiniteStructureOracle

    lines = ["(set-logic QFBAPAI)"]
    if isinstance(p.oracle, FiniteStructureOracle):
        lines.append(structure_form(p.oracle.structure))
    lines.append(f"(declare-index-card {p.index_card.n})")
    for a in p.arrays:
        lines.append(f"(declare-array {a})")
    for c in p.constants:
        lines.append(f"(declare-const {c} elem)")
    for name in p.set_vars:
        body = print_component_formula(p.definitions[name])
        params = " ".join(p.arrays)
        lines.append(f"(define-set {name} (lambda ({params}) {body}))")
    lines.append(f"(assert {print_qfbapa_formula(p.skeleton)})")
    lines.append("(check-sat)")
    return "\n".join(lines)


def cal_script_text(f, s, n) -> str:
    printer = _CalPrinter()
    body_text = printer.formula(f)
    arrays, values, indices, _ = cl.inventory(f)
    lines = ["(set-logic CAL)", structure_form(s), f"(declare-index-card {n})"]
    for a in arrays:
        lines.append(f"(declare-array {a})")
    for v in values:
        lines.append(f"(declare-const {v} value)")
    for i in indices:
        lines.append(f"(declare-const {i} index)")
    for body, name in printer.sets.items():
        inner = _print_set_body(body, arrays)
        lines.append(f"(define-set {name} (lambda (l) {inner}))")
    lines.append(f"(assert {body_text})")
    lines.append("(check-sat)")
    return "\n".join(lines)


def _print_set_body(body: QFFormula, arrays) -> str:
    def term(t) -> str:
        from .formula import App

        if isinstance(t, Var):
            if t.name in arrays:
                return f"(select {t.name} l)"
            return t.name
        if isinstance(t, Const):
            return t.name
        return "(" + t.func + " " + " ".join(term(a) for a in t.args) + ")"

    def go(g) -> str:
        if isinstance(g, Atom):
            lit = g.literal
            s = "(" + lit.relation + " " + " ".join(term(a) for a in lit.args) + ")"
            return s if lit.positive else f"(not {s})"
        if isinstance(g, Not):
            return f"(not {go(g.inner)})"
        if isinstance(g, And):
            return "(and " + " ".join(go(p) for p in g.parts) + ")" if g.parts else "(and)"
        return "(or " + " ".join(go(p) for p in g.parts) + ")" if g.parts else "(or)"

    return go(body)


def skolem_script_text(f) -> str:
    lines = ["(set-logic SKOLEM)"]
    for v in skolem_vars(f):
        lines.append(f"(declare-const {v} pos)")
    lines.append(f"(assert {print_skolem_formula(f)})")
    lines.append("(check-sat)")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Fuzzing


def _fuzz_power(rng, inject_bug: bool):
    s, n, f, variables = gen_power_instance(rng)
    got = solve_power(PowerProblem(finite_oracle(s), Finite(n), f))
    if inject_bug and got.is_sat:
        got = SolveResult(UNSAT)
    want = brute_force_power_sat(s, n, f, variables)
    if got.is_unknown:
        return None, power_script_text(s, n, f, variables)
    if got.is_sat != want.is_sat:
        return f"solver={got.status} oracle={want.status}", power_script_text(s, n, f, variables)
    if got.is_sat:
        vecs = got.model.vectors(n)
        point = PowerPoint({v: vecs.get(v, (0,) * n) for v in variables})
        if not power_holds(s, n, f, point):
            return "model fails power semantics", power_script_text(s, n, f, variables)
    return None, None


def _fuzz_qfbapa(rng, inject_bug: bool):
    f, maxc = gen_qfbapa(rng)
    got = qfbapa_sat(f, maxc=maxc)
    if inject_bug and got.is_sat:
        got = SolveResult(UNSAT)
    text = qfbapa_script_text(f, maxc)
    if got.is_unknown:
        return None, text
    if got.is_sat and not eval_formula(f, got.model):
        return "model fails set semantics", text
    want = qfbapa_brute_force(f, maxc)
    if want.is_sat and not got.is_sat:
        return "oracle found a model the solver missed", text
    if got.is_sat and not want.is_sat:
        if all(-6 <= v <= 6 for v in got.model.ints.values()):
            return "solver claims sat inside the oracle grid", text
    return None, None


def _fuzz_qfbapai(rng, inject_bug: bool):
    p = gen_qfbapai(rng)
    got = solve_qfbapai(p)
    if inject_bug and got.is_sat:
        got = SolveResult(UNSAT)
    text = qfbapai_script_text(p)
    if got.is_unknown:
        return None, text
    want = qfbapai_brute_force(p)
    if got.is_sat != want.is_sat:
        return f"solver={got.status} oracle={want.status}", text
    if got.is_sat:
        induced = witness_induced_model(p, got.model, p.index_card.n)
        if not eval_formula(p.skeleton, induced):
            return "witness fails on re-evaluation", text
    return None, None


def _fuzz_cal(rng, inject_bug: bool):
    f, s, n = gen_cal(rng)
    translation = cl.translate(f, finite_oracle(s), Finite(n))
    got = solve_qfbapai(translation.problem)
    if inject_bug and got.is_sat:
        got = SolveResult(UNSAT)
    text = cal_script_text(f, s, n)
    if got.is_unknown:
        return None, text
    want = cl.cal_brute_force(f, s, n)
    if got.is_sat != want.is_sat:
        return f"solver={got.status} oracle={want.status}", text
    return None, None


def _fuzz_skolem(rng, inject_bug: bool):
    f = gen_skolem(rng)
    got = skolem_sat(f)
    if inject_bug and got.is_sat:
        got = SolveResult(UNSAT)
    text = skolem_script_text(f)
    if got.is_unknown:
        return None, text
    want = skolem_oracle(f, 64)
    if got.is_unsat and want.is_sat:
        return "oracle found a model below 64", text
    if got.is_sat and all(v <= 64 for v in got.model.values()) and not want.is_sat:
        return "oracle misses the solver's in-range witness", text
    return None, None


FUZZERS = {
    "power": _fuzz_power,
    "qfbapa": _fuzz_qfbapa,
    "qfbapai": _fuzz_qfbapai,
    "cal": _fuzz_cal,
    "skolem": _fuzz_skolem,
}


def fuzz(logic: str, count: int, seed: int, inject_bug: bool = False, out_dir: str = ".") -> int:
    """Run the differential harness; returns the number of disagreements
    and writes one reproduction script per disagreement."""
    import os
    import random

    if logic not in FUZZERS:
        raise PowsatError(f"no fuzzer for logic {logic!r}; choose from {sorted(FUZZERS)}")
    rng = random.Random(seed)
    runner = FUZZERS[logic]
    bad = 0
    unknowns = 0
    for k in range(count):
        problem_rng = random.Random(rng.randrange(2**63))
        detail, text = runner(problem_rng, inject_bug)
        if detail is None and text is not None:
            unknowns += 1
            continue
        if detail is not None:
            bad += 1
            path = os.path.join(out_dir, f"powsat-fuzz-{logic}-{seed}-{k}.sexp")
            with open(path, "w") as fh:
                fh.write(f"; disagreement: {detail}\n")
                fh.write(text + "\n")
            print(f"disagreement at instance {k}: {detail} (repro: {path})")
    print(f"fuzz {logic}: {count} instances, {bad} disagreements, {unknowns} inconclusive")
    return bad


# ---------------------------------------------------------------------------
# Entry point


class _Timeout(Exception):
    pass


def _with_timeout(ms: int | None, fn):
    if not ms:
        return fn()

    def handler(signum, frame):
        raise _Timeout()

    old = signal.signal(signal.SIGALRM, handler)
    signal.setitimer(signal.ITIMER_REAL, ms / 1000.0)
    try:
        return fn()
    finally:
        signal.setitimer(signal.ITIMER_REAL, 0)
        signal.signal(signal.SIGALRM, old)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="powsat", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="decide a script")
    p_solve.add_argument("file")
    p_solve.add_argument("--emit-certificate", metavar="PATH")
    p_solve.add_argument("--timeout-ms", type=int, default=None)

    p_check = sub.add_parser("check-cert", help="check a certificate against a script")
    p_check.add_argument("file")
    p_check.add_argument("cert")

    p_tr = sub.add_parser("translate", help="translate a script to another logic")
    p_tr.add_argument("--from", dest="source", required=True, choices=["cal"])
    p_tr.add_argument("file")

    p_or = sub.add_parser("oracle", help="run the brute-force oracle on a script")
    p_or.add_argument("file")
    p_or.add_argument("--bound", type=int, default=64)

    p_fz = sub.add_parser("fuzz", help="differential testing against the oracles")
    p_fz.add_argument("--logic", required=True)
    p_fz.add_argument("--count", type=int, default=100)
    p_fz.add_argument("--seed", type=int, default=0)
    p_fz.add_argument("--out-dir", default=".")
    p_fz.add_argument("--inject-bug", action="store_true",
                      help="deliberately corrupt verdicts (harness self-test)")

    args = parser.parse_args(argv)
    try:
        if args.command == "solve":
            with open(args.file) as fh:
                script = parse(fh.read())
            try:
                result, problem = _with_timeout(args.timeout_ms, lambda: solve_script(script))
            except _Timeout:
                print("unknown")
                return EXIT[UNKNOWN]
            print(result.status)
            for line in _model_lines(script, result, problem):
                print(line)
            if args.emit_certificate and result.is_sat:
                text = certificate_text(script, result)
                if text is not None:
                    with open(args.emit_certificate, "w") as fh:
                        fh.write(text + "\n")
            return EXIT[result.status]
        if args.command == "check-cert":
            with open(args.file) as fh:
                script = parse(fh.read())
            with open(args.cert) as fh:
                cert_text = fh.read()
            out = check_script_certificate(script, cert_text)
            print("accepted" if out.accepted else f"rejected: {out.reason}")
            return 0 if out.accepted else 1
        if args.command == "translate":
            with open(args.file) as fh:
                script = parse(fh.read())
            if script.logic != "CAL":
                raise PowsatError("translate --from cal expects a CAL script")
            formula, structure, card = build_problem(script)
            translation = cl.translate(formula, finite_oracle(structure), card)
            print(qfbapai_script_text(translation.problem))
            return 0
        if args.command == "oracle":
            with open(args.file) as fh:
                script = parse(fh.read())
            result = _run_oracle(script, args.bound)
            print(result.status)
            return EXIT[result.status]
        if args.command == "fuzz":
            bad = fuzz(args.logic, args.count, args.seed,
                       inject_bug=args.inject_bug, out_dir=args.out_dir)
            return 1 if bad else 0
    except SourceError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    except PowsatError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_ERROR


def _run_oracle(script: Script, bound: int) -> SolveResult:
    problem = build_problem(script)
    logic = script.logic
    if logic == "POWER":
        if not isinstance(script.index_card, int):
            raise PowsatError("the power oracle needs a finite index card")
        return brute_force_power_sat(script.structure, script.index_card,
                                     conj(*script.assertions) if script.assertions else And(()))
    if logic == "SKOLEM":
        return skolem_oracle(problem, bound)
    if logic == "QFBAPA":
        formula, maxc = problem
        if maxc is None:
            raise PowsatError("the subset oracle needs a concrete universe size")
        return qfbapa_brute_force(formula, maxc)
    if logic == "QFBAPAI":
        return qfbapai_brute_force(problem)
    if logic == "CAL":
        formula, structure, card = problem
        return cl.cal_brute_force(formula, structure, card.n)
    raise PowsatError(f"no oracle for {logic!r}")


if __name__ == "__main__":
    sys.exit(main())
