"""The pluggable component-theory contract and its two shipped instances.

Every power-style solver is parameterized by an oracle that decides
quantifier-free formulas of the component theory and can re-check models
independently of how ``decide`` found them.  ``unknown`` is a first-class
answer: resource limits are never reported as unsat.
"""

from __future__ import annotations

from typing import Mapping

from .errors import CapacityError, MalformedInputError
from .formula import And, App, Atom, Const, Literal, Not, Or, QFFormula, Signature, Var, conj, free_vars
from .presburger import lia_sat_formula, linear_eq, linear_le
from .result import SolveResult, sat, unknown
from .result import unsat as unsat_result
from .structures import FiniteStructure, brute_force_sat, holds


class ComponentOracle:
    """Decision + model-checking interface for one component theory."""

    def signature(self) -> Signature:
        raise NotImplementedError

    def decide(self, f: QFFormula) -> SolveResult:
        """sat (with a model for every free variable), unsat, or unknown."""
        raise NotImplementedError

    def model_check(self, f: QFFormula, model: Mapping[str, object]) -> bool:
        """Re-evaluate ``f`` under ``model`` along an independent path."""
        raise NotImplementedError


class FiniteStructureOracle(ComponentOracle):
    """Brute-force oracle over an explicit finite structure.

    Large conjunctive queries are split into variable-connectivity
    components, conditioning on the most-shared variable when a component
    is still too big (the coupled queries built by the interpreted-sets
    solver share only a few constants between otherwise independent
    groups, so this keeps the enumeration near the sum, not the product,
    of the group sizes).
    """

    LEAF_LIMIT = 20000

    def __init__(self, structure: FiniteStructure):
        self.structure = structure

    def signature(self) -> Signature:
        return self.structure.signature

    def decide(self, f: QFFormula) -> SolveResult:
        try:
            return self._decide(f)
        except CapacityError as e:
            return unknown(str(e))

    def _decide(self, f: QFFormula) -> SolveResult:
        from .structures import capacity_cap

        total = self.structure.carrier_size ** len(free_vars(f))
        if total <= self.LEAF_LIMIT:
            return brute_force_sat(self.structure, f)
        parts = list(f.parts) if isinstance(f, And) else [f]
        budget = [capacity_cap()]
        model = self._split(parts, {}, budget)
        if model is None:
            return unsat_result()
        return sat({v: model.get(v, 0) for v in free_vars(f)})

    def _split(self, parts: list, pinned: dict, budget: list) -> dict | None:
        """Satisfy a conjunction given pinned values; None means unsat."""
        m = self.structure.carrier_size
        groups: list[tuple[set, list]] = []
        for part in parts:
            vs = free_vars(part) - set(pinned)
            hits = [g for g in groups if g[0] & vs]
            for g in hits:
                groups.remove(g)
            for g in hits:
                vs = vs | g[0]
            groups.append((vs, [part] + [q for g in hits for q in g[1]]))
        model = dict(pinned)
        for vs, group in sorted(groups, key=lambda g: (len(g[0]), sorted(g[0]))):
            if m ** len(vs) <= self.LEAF_LIMIT:
                sub = self._enumerate(group, sorted(vs), model, budget)
            else:
                # condition on the variable shared by the most conjuncts
                counts = {v: sum(1 for q in group if v in free_vars(q)) for v in vs}
                pick = max(sorted(vs), key=lambda v: counts[v])
                sub = None
                for value in range(m):
                    trial = dict(model)
                    trial[pick] = value
                    sub = self._split(group, trial, budget)
                    if sub is not None:
                        break
            if sub is None:
                return None
            model.update(sub)
        return model

    def _enumerate(self, parts: list, names: list, pinned: dict, budget: list) -> dict | None:
        import itertools

        from ._engine import kernel
        from ._engine.program import compile_query

        g = conj(*parts)
        m = self.structure.carrier_size
        budget[0] -= m ** len(names)
        if budget[0] < 0:
            raise CapacityError("decomposition exceeded the enumeration cap")
        order = list(names) + sorted(set(pinned) & free_vars(g))
        query = compile_query(self.structure, g, order)
        tail = [pinned[v] for v in order[len(names):]]
        for combo in itertools.product(range(m), repeat=len(names)):
            if kernel.eval_component(query, list(combo) + tail):
                return dict(zip(names, combo))
        return None

    def model_check(self, f: QFFormula, model) -> bool:
        rng = range(self.structure.carrier_size)
        if not all(v in rng for v in model.values()):
            return False
        if not free_vars(f) <= set(model):
            return False
        return holds(self.structure, f, model)


def finite_oracle(structure: FiniteStructure) -> ComponentOracle:
    return FiniteStructureOracle(structure)


LIA_SIGNATURE = Signature(
    sorts=("int",),
    constants=(),  # numerals: any constant whose name parses as an integer
    functions=(("+", ("int", "int"), "int"),),
    relations=(("=", ("int", "int")), ("<=", ("int", "int"))),
)


def _numeral(name: str) -> int:
    try:
        return int(name)
    except ValueError:
        raise MalformedInputError(f"constant {name!r} is not a numeral")


def _term_to_linear(t) -> tuple[dict[str, int], int]:
    if isinstance(t, Var):
        return {t.name: 1}, 0
    if isinstance(t, Const):
        return {}, _numeral(t.name)
    if isinstance(t, App):
        if t.func != "+" or len(t.args) != 2:
            raise MalformedInputError(f"unsupported arithmetic function {t.func!r}")
        cl, kl = _term_to_linear(t.args[0])
        cr, kr = _term_to_linear(t.args[1])
        for v, a in cr.items():
            cl[v] = cl.get(v, 0) + a
        return cl, kl + kr
    raise MalformedInputError(f"not a term: {t!r}")


def _literal_to_linear(lit: Literal):
    if len(lit.args) != 2:
        raise MalformedInputError(f"relation {lit.relation!r} must be binary")
    cl, kl = _term_to_linear(lit.args[0])
    cr, kr = _term_to_linear(lit.args[1])
    diff = dict(cl)
    for v, a in cr.items():
        diff[v] = diff.get(v, 0) - a
    k = kl - kr
    if lit.relation == "=":
        out = linear_eq(diff, k)
    elif lit.relation == "<=":
        out = linear_le(diff, k)
    else:
        raise MalformedInputError(f"unknown arithmetic relation {lit.relation!r}")
    return out if lit.positive else out.negated()


def _to_linear_formula(f: QFFormula) -> QFFormula:
    if isinstance(f, Atom):
        return Atom(_literal_to_linear(f.literal))
    if isinstance(f, Not):
        return Not(_to_linear_formula(f.inner))
    if isinstance(f, And):
        return And(tuple(_to_linear_formula(p) for p in f.parts))
    if isinstance(f, Or):
        return Or(tuple(_to_linear_formula(p) for p in f.parts))
    raise MalformedInputError(f"not a formula: {f!r}")


def _eval_int_term(t, model) -> int:
    if isinstance(t, Var):
        return model[t.name]
    if isinstance(t, Const):
        return _numeral(t.name)
    if isinstance(t, App) and t.func == "+":
        return _eval_int_term(t.args[0], model) + _eval_int_term(t.args[1], model)
    raise MalformedInputError(f"not an arithmetic term: {t!r}")


class LIAOracle(ComponentOracle):
    """Linear integer arithmetic over Z, or over N when ``naturals``.

    The carrier of the N mode is the nonnegative integers; model values
    outside the carrier fail ``model_check``.
    """

    def __init__(self, naturals: bool = False):
        self.naturals = naturals

    def signature(self) -> Signature:
        return LIA_SIGNATURE

    def decide(self, f: QFFormula) -> SolveResult:
        names = free_vars(f)
        g = _to_linear_formula(f)
        nonneg = frozenset(names) if self.naturals else frozenset()
        r = lia_sat_formula(g, nonneg=nonneg)
        if not r.is_sat:
            return r
        model = {v: r.model.get(v, 0) for v in names}
        return sat(model)

    def model_check(self, f: QFFormula, model) -> bool:
        if not free_vars(f) <= set(model):
            return False
        if self.naturals and any(v < 0 for v in model.values()):
            return False

        def go(g) -> bool:
            if isinstance(g, Atom):
                lit = g.literal
                l = _eval_int_term(lit.args[0], model)
                r = _eval_int_term(lit.args[1], model)
                out = l == r if lit.relation == "=" else l <= r
                return out if lit.positive else not out
            if isinstance(g, Not):
                return not go(g.inner)
            if isinstance(g, And):
                return all(go(p) for p in g.parts)
            return any(go(p) for p in g.parts)

        return go(f)


def lia_oracle(naturals: bool = False) -> ComponentOracle:
    return LIAOracle(naturals)
