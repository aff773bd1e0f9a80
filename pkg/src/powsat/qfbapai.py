"""Satisfiability for set-algebra constraints whose set variables are
interpreted as index sets defined by component-theory formulas.

An instance couples a set/cardinality skeleton F over S_1..S_k with
defining formulas phi_1..phi_k over shared component variables (arrays
x_1..x_n, one value per index) and shared constants c_1..c_m; S_i is the
set of indices where phi_i holds of the arrays' components.

Deciding proceeds over region patterns (polarity vectors over the k
definitions).  For a candidate support of patterns and a cover bit b the
solver asks two independent questions and combines them:

* one coupled component query: a fresh tuple per chosen pattern, all
  sharing the constants, each realizing exactly its pattern (plus, when
  b = 0, a default tuple realizing none of the chosen patterns);
* one set-algebra query: F with every chosen region nonempty, and, when
  b = 1, the chosen regions covering the whole universe.

When b = 0 the sets-side model must additionally confine every index
outside the chosen regions to the single region realized by the default
tuple; without that confinement a witness assembled from the two models
can change untracked region cardinalities and break F.  The solver and
the certificate checker both enforce it.

Supports are searched by iterative deepening for small k.  For larger k
(array-logic translations) candidate supports are read off set-side
models instead, with unsatisfiable pattern fragments learned as empty-
region constraints; this is verdict-equivalent and avoids enumerating
2^k patterns.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import CapacityError, MalformedInputError
from .formula import Not, QFFormula, conj, disj, free_vars, rename_vars
from .oracles import ComponentOracle
from .qfbapa import (
    Card, IntConst, IntEq, IntLe, SCompl, SVar, SetEq, SetModel, UNIVERSE, batom,
    eval_formula, formula_variables, qfbapa_sat, s_inter, s_union,
)
from .result import ACCEPT, CheckResult, SolveResult, reject, sat, unknown, unsat
from .structures import Finite, IndexCard, Unbounded

PATTERN_CAP = 12
DEEPENING_CAP = 4      # largest k decided by blind support enumeration
CEGAR_LIMIT = 60


@dataclass(frozen=True)
class QFBAPAIProblem:
    oracle: ComponentOracle
    index_card: IndexCard
    skeleton: QFFormula                      # set/cardinality formula over set_vars
    set_vars: tuple[str, ...]
    definitions: Mapping[str, QFFormula]     # set var -> component formula
    arrays: tuple[str, ...]                  # component variables (one value per index)
    constants: tuple[str, ...] = ()          # shared constants

    def validate(self) -> "QFBAPAIProblem":
        if len(set(self.set_vars)) != len(self.set_vars):
            raise MalformedInputError("duplicate set variables")
        if set(self.definitions) != set(self.set_vars):
            raise MalformedInputError("definitions must cover the set variables exactly")
        skel_sets, _ = formula_variables(self.skeleton)
        if not set(skel_sets) <= set(self.set_vars):
            raise MalformedInputError(f"undefined set variables {set(skel_sets) - set(self.set_vars)}")
        allowed = set(self.arrays) | set(self.constants)
        for s, phi in self.definitions.items():
            loose = free_vars(phi) - allowed
            if loose:
                raise MalformedInputError(f"definition of {s} uses undeclared names {sorted(loose)}")
        if set(self.arrays) & set(self.constants):
            raise MalformedInputError("a name cannot be both an array and a constant")
        return self


@dataclass(frozen=True)
class RegionPattern:
    """A polarity per defining formula: 1 inside, 0 outside."""

    bits: tuple[int, ...]

    def label(self) -> str:
        return "".join(map(str, self.bits))


@dataclass(frozen=True)
class SupportCertificate:
    regions: tuple[RegionPattern, ...]
    cover_bit: int
    component_model: Mapping[str, object]
    set_model: SetModel


@dataclass(frozen=True)
class ArrayWitness:
    arrays: Mapping[str, tuple]
    constants: Mapping[str, object]


def all_patterns(k: int) -> list[RegionPattern]:
    return [RegionPattern(bits) for bits in itertools.product((0, 1), repeat=k)]


def _signed(phi: QFFormula, bit: int) -> QFFormula:
    return phi if bit else Not(phi)


def _rank_name(array: str, rank: int) -> str:
    return f"{array}@{rank}"


def pattern_formula(p: QFBAPAIProblem, pattern: Sequence[int], rename_rank: int | None) -> QFFormula:
    """The conjunction pinning one tuple to exactly this pattern; array
    variables are renamed to their rank copy when requested."""
    parts = []
    for s, bit in zip(p.set_vars, pattern):
        phi = p.definitions[s]
        if rename_rank is not None:
            phi = rename_vars(phi, {x: _rank_name(x, rename_rank) for x in p.arrays})
        parts.append(_signed(phi, bit))
    return conj(*parts)


def build_component_query(
    p: QFBAPAIProblem, regions: Sequence[RegionPattern], b: int,
) -> QFFormula:
    """One coupled query: per chosen region (in lexicographic order) a
    fresh array tuple realizing exactly its pattern, all sharing the
    constants; with b = 0 also a rank-0 tuple realizing no chosen pattern."""
    ordered = sorted(regions, key=lambda r: r.bits)
    parts = [
        pattern_formula(p, beta.bits, rank)
        for rank, beta in enumerate(ordered, start=1)
    ]
    if b == 0:
        hit_some = disj(*[pattern_formula(p, beta.bits, 0) for beta in ordered])
        parts.append(Not(hit_some))
    return conj(*parts)


def region_set_expr(set_vars: Sequence[str], pattern: Sequence[int]):
    parts = [SVar(v) if bit else SCompl(SVar(v)) for v, bit in zip(set_vars, pattern)]
    return s_inter(*parts)


def build_qfbapa_query(
    p: QFBAPAIProblem, regions: Sequence[RegionPattern], b: int,
) -> QFFormula:
    """F with every chosen region nonempty; with b = 1 the chosen regions
    must cover the universe."""
    ordered = sorted(regions, key=lambda r: r.bits)
    parts: list[QFFormula] = [p.skeleton]
    for beta in ordered:
        parts.append(batom(IntLe(IntConst(1), Card(region_set_expr(p.set_vars, beta.bits)))))
    if b == 1:
        union = s_union(*[region_set_expr(p.set_vars, beta.bits) for beta in ordered])
        parts.append(batom(SetEq(union, UNIVERSE)))
    return conj(*parts)


def _confinement_constraint(p: QFBAPAIProblem, regions, beta0: RegionPattern) -> QFFormula:
    """Every index lies in a chosen region or in the default pattern's
    region (the b = 0 soundness condition)."""
    exprs = [region_set_expr(p.set_vars, beta.bits) for beta in regions]
    exprs.append(region_set_expr(p.set_vars, beta0.bits))
    return batom(SetEq(s_union(*exprs), UNIVERSE))


def component_env(p: QFBAPAIProblem, model: Mapping, rank: int) -> dict:
    env = {c: model.get(c, 0) for c in p.constants}
    env.update({x: model.get(_rank_name(x, rank), 0) for x in p.arrays})
    return env


def induced_pattern(p: QFBAPAIProblem, env: Mapping) -> RegionPattern:
    bits = tuple(
        1 if p.oracle.model_check(p.definitions[s], env) else 0 for s in p.set_vars
    )
    return RegionPattern(bits)


def _index_pattern(p: QFBAPAIProblem, m: SetModel, r: int) -> RegionPattern:
    return RegionPattern(tuple(1 if r in m.sets.get(s, ()) else 0 for s in p.set_vars))


def assemble_arrays(
    p: QFBAPAIProblem,
    regions: Sequence[RegionPattern],
    b: int,
    component_model: Mapping,
    set_model: SetModel,
) -> ArrayWitness:
    """Each index in a chosen region receives that region's tuple; the
    remaining indices (b = 0) receive the rank-0 default tuple."""
    ordered = sorted(regions, key=lambda r: r.bits)
    rank_of = {beta: rank for rank, beta in enumerate(ordered, start=1)}
    n = set_model.maxc
    columns = []
    for r in range(n):
        beta = _index_pattern(p, set_model, r)
        if beta in rank_of:
            columns.append(component_env(p, component_model, rank_of[beta]))
        elif b == 0:
            columns.append(component_env(p, component_model, 0))
        else:
            raise AssertionError("internal: uncovered index under a cover certificate")
    constants = {c: component_model.get(c, 0) for c in p.constants}
    arrays = {x: tuple(col[x] for col in columns) for x in p.arrays}
    return ArrayWitness(arrays=arrays, constants=constants)


def witness_induced_model(p: QFBAPAIProblem, w: ArrayWitness, n: int) -> SetModel:
    """Re-derive the set model from a witness by evaluating every
    definition at every index (the from-scratch re-evaluation)."""
    sets = {s: set() for s in p.set_vars}
    for r in range(n):
        env = dict(w.constants)
        env.update({x: w.arrays[x][r] for x in p.arrays})
        for s in p.set_vars:
            if p.oracle.model_check(p.definitions[s], env):
                sets[s].add(r)
    return SetModel(maxc=n, sets={s: frozenset(v) for s, v in sets.items()}, ints={})


def witness_satisfies(p: QFBAPAIProblem, w: ArrayWitness, n: int, ints: Mapping[str, int] = {}) -> bool:
    induced = witness_induced_model(p, w, n)
    induced = SetModel(maxc=n, sets=induced.sets, ints=dict(ints))
    return eval_formula(p.skeleton, induced)


# ---------------------------------------------------------------------------
# Solving


def solve_qfbapai(
    p: QFBAPAIProblem,
    pattern_cap: int = PATTERN_CAP,
    deepening_cap: int = DEEPENING_CAP,
    cegar_limit: int = CEGAR_LIMIT,
) -> SolveResult:
    """sat/unsat/unknown; sat carries an ArrayWitness and the
    SupportCertificate that produced it."""
    p.validate()
    if isinstance(p.index_card, Unbounded):
        raise CapacityError("unbounded index sets are out of scope here")
    n = p.index_card.n
    k = len(p.set_vars)
    if k > pattern_cap:
        raise CapacityError(f"{k} definitions exceed the pattern cap {pattern_cap}")

    solo_memo: dict[tuple, bool | None] = {}

    def fragment_sat(items: tuple[tuple[int, int], ...]) -> bool | None:
        """Is the conjunction of the selected signed definitions alone
        satisfiable (shared constants free)?  None = oracle unknown."""
        if items in solo_memo:
            return solo_memo[items]
        parts = [_signed(p.definitions[p.set_vars[i]], bit) for i, bit in items]
        r = p.oracle.decide(conj(*parts))
        out = None if r.is_unknown else r.is_sat
        solo_memo[items] = out
        return out

    def solo_sat(beta: RegionPattern) -> bool | None:
        return fragment_sat(tuple(enumerate(beta.bits)))

    def finish(regions: tuple[RegionPattern, ...], b: int, cmodel, qmodel: SetModel) -> SolveResult:
        witness = assemble_arrays(p, regions, b, cmodel, qmodel)
        induced = witness_induced_model(p, witness, n)
        if induced.sets != {s: frozenset(qmodel.sets.get(s, frozenset())) for s in p.set_vars}:
            raise AssertionError("internal: witness shifts a region")
        if not eval_formula(p.skeleton, SetModel(n, induced.sets, qmodel.ints)):
            raise AssertionError("internal: witness fails the skeleton")
        cert = SupportCertificate(regions, b, dict(cmodel), qmodel)
        return sat(witness, cert)

    unknown_seen = False

    if k <= deepening_cap:
        patterns = all_patterns(k)
        for size in range(0, min(len(patterns), n) + 1):
            for b in (0, 1):
                for support in itertools.combinations(patterns, size):
                    if any(solo_sat(beta) is False for beta in support):
                        continue
                    y = build_component_query(p, support, b)
                    cr = p.oracle.decide(y)
                    if cr.is_unknown:
                        unknown_seen = True
                        continue
                    if cr.is_unsat:
                        continue
                    y2 = build_qfbapa_query(p, support, b)
                    if b == 0:
                        beta0 = induced_pattern(p, component_env(p, cr.model, 0))
                        y2 = conj(y2, _confinement_constraint(p, support, beta0))
                    qr = qfbapa_sat(y2, maxc=n)
                    if qr.is_unknown:
                        unknown_seen = True
                        continue
                    if qr.is_sat:
                        return finish(tuple(support), b, cr.model, qr.model)
        if unknown_seen:
            return unknown("an oracle call could not be decided")
        return unsat()

    # model-guided support search (cover style: b = 1).  Every set-side
    # model's realized patterns form a cover support, so its own model
    # already satisfies the nonemptiness and cover constraints; only the
    # coupled component query remains to be checked.
    blocked: list[QFFormula] = []
    for _ in range(cegar_limit):
        qr = qfbapa_sat(conj(p.skeleton, *blocked), maxc=n)
        if qr.is_unknown:
            return unknown("set-side backend hit a limit")
        if qr.is_unsat:
            if unknown_seen:
                return unknown("an oracle call could not be decided")
            return unsat()
        support = tuple(sorted(
            {_index_pattern(p, qr.model, r) for r in range(n)},
            key=lambda beta: beta.bits,
        ))
        y = build_component_query(p, support, 1)
        cr = p.oracle.decide(y)
        if cr.is_sat:
            return finish(support, 1, cr.model, qr.model)
        if cr.is_unknown:
            unknown_seen = True
        # learn why this support fails: empty-region constraints for
        # unsatisfiable pattern fragments, else a minimal unsatisfiable
        # sub-support that must not stay fully realized
        learned_core = False
        for beta in support:
            if solo_sat(beta) is False:
                core = list(enumerate(beta.bits))
                for item in list(core):
                    if len(core) == 1:
                        break
                    trial = tuple(x for x in core if x != item)
                    if fragment_sat(trial) is False:
                        core = list(trial)
                expr = s_inter(*[
                    SVar(p.set_vars[i]) if bit else SCompl(SVar(p.set_vars[i]))
                    for i, bit in core
                ])
                blocked.append(batom(IntEq(Card(expr), IntConst(0))))
                learned_core = True
        if not learned_core:
            sub = list(support)
            if cr.is_unsat:
                for beta in list(sub):
                    if len(sub) == 1:
                        break
                    trial = [x for x in sub if x != beta]
                    if p.oracle.decide(build_component_query(p, trial, 1)).is_unsat:
                        sub = trial
            blocked.append(disj(*[
                batom(IntEq(Card(region_set_expr(p.set_vars, beta.bits)), IntConst(0)))
                for beta in sub
            ]))
    return unknown("support search hit its iteration limit")


# ---------------------------------------------------------------------------
# Certificate checking


def check_certificate_qfbapai(p: QFBAPAIProblem, cert: SupportCertificate) -> CheckResult:
    """Accept iff the component model satisfies the coupled query, the set
    model satisfies the set-side query under direct set semantics, and
    (b = 0) stray indices are confined to the default tuple's region."""
    if not isinstance(cert, SupportCertificate):
        return reject("not a support certificate")
    if isinstance(p.index_card, Unbounded):
        return reject("certificates require a finite index set")
    n = p.index_card.n
    k = len(p.set_vars)
    if cert.cover_bit not in (0, 1):
        return reject("cover bit must be 0 or 1")
    seen = set()
    for beta in cert.regions:
        if not isinstance(beta, RegionPattern) or len(beta.bits) != k:
            return reject("malformed region pattern")
        if beta.bits in seen:
            return reject("duplicate region in the support")
        seen.add(beta.bits)
    if cert.set_model.maxc != n:
        return reject(f"set model universe {cert.set_model.maxc} != index count {n}")

    y = build_component_query(p, cert.regions, cert.cover_bit)
    if not p.oracle.model_check(y, cert.component_model):
        return reject("component model fails the coupled query")
    y2 = build_qfbapa_query(p, cert.regions, cert.cover_bit)
    if not eval_formula(y2, cert.set_model):
        return reject("set model fails the set-side query")
    if cert.cover_bit == 0:
        beta0 = induced_pattern(p, component_env(p, cert.component_model, 0))
        allowed = seen | {beta0.bits}
        for r in range(n):
            if _index_pattern(p, cert.set_model, r).bits not in allowed:
                return reject("index outside the chosen regions and the default region")
    return ACCEPT


# ---------------------------------------------------------------------------
# Brute-force oracle


def qfbapai_brute_force(p: QFBAPAIProblem) -> SolveResult:
    """Enumerate all constants and arrays over the component carrier,
    induce the sets, and evaluate the skeleton directly.  Requires the
    finite-structure oracle (the carrier must be enumerable)."""
    from ._engine import kernel
    from ._engine.program import compile_query
    from .oracles import FiniteStructureOracle

    if not isinstance(p.oracle, FiniteStructureOracle):
        raise MalformedInputError("brute force needs an explicit finite structure")
    if isinstance(p.index_card, Unbounded):
        raise CapacityError("cannot enumerate an unbounded index set")
    _, int_vars = formula_variables(p.skeleton)
    if int_vars:
        raise MalformedInputError("free integer variables in the skeleton are not enumerable")
    structure = p.oracle.structure
    m = structure.carrier_size
    n = p.index_card.n
    names = list(p.arrays) + list(p.constants)
    programs = [compile_query(structure, p.definitions[s], names) for s in p.set_vars]

    for consts in itertools.product(range(m), repeat=len(p.constants)):
        for columns in itertools.product(
            itertools.product(range(m), repeat=len(p.arrays)), repeat=n
        ):
            sets = {s: set() for s in p.set_vars}
            for r, col in enumerate(columns):
                env = list(col) + list(consts)
                for s, prog in zip(p.set_vars, programs):
                    if kernel.eval_component(prog, env):
                        sets[s].add(r)
            model = SetModel(
                maxc=n, sets={s: frozenset(v) for s, v in sets.items()}, ints={},
            )
            if eval_formula(p.skeleton, model):
                arrays = {
                    x: tuple(columns[r][j] for r in range(n))
                    for j, x in enumerate(p.arrays)
                }
                witness = ArrayWitness(arrays=arrays, constants=dict(zip(p.constants, consts)))
                return sat(witness)
    return unsat()
