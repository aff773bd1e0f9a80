"""Complete satisfiability for linear integer constraints.

Conjunctions of equalities, inequalities, and divisibility atoms are
decided by: divisibility -> fresh quotient variables, equality
normalization and unit-coefficient substitution, gcd tightening of
inequalities, then exact-rational LP relaxation (phase-1 simplex over
Fraction, Bland's rule) with branch-and-bound on fractional variables.
Branching is confined to the classical small-solution box, so the search
is finite; a node cap converts pathological cases into ``unknown`` (never
``unsat``).  All arithmetic is arbitrary precision.

Boolean combinations are handled by streaming DNF clauses through the
conjunction solver (`lia_sat_formula`).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor, gcd
from typing import Iterable, Iterator, Mapping

from .errors import MalformedInputError
from .formula import QFFormula, to_dnf
from .result import SolveResult, sat, unknown, unsat

COEFF_BOUND = 2**31
DEFAULT_NODE_LIMIT = 5000


@dataclass(frozen=True)
class LinearAtom:
    """A linear constraint over integer variables.

    With L = sum(coeff * var) + constant the positive readings are::

        eq:   L = 0
        le:   L <= 0
        dvd:  modulus divides L

    ``positive=False`` denotes the negation (produced by DNF streaming and
    expanded away by the solver).
    """

    coeffs: tuple[tuple[str, int], ...]
    constant: int
    kind: str  # "eq" | "le" | "dvd"
    modulus: int | None = None
    positive: bool = True

    def __post_init__(self):
        if self.kind not in ("eq", "le", "dvd"):
            raise MalformedInputError(f"bad linear atom kind {self.kind!r}")
        if (self.kind == "dvd") != (self.modulus is not None):
            raise MalformedInputError("modulus exactly on dvd atoms")
        if self.modulus is not None and self.modulus < 1:
            raise MalformedInputError("dvd modulus must be >= 1")

    def negated(self) -> "LinearAtom":
        return LinearAtom(self.coeffs, self.constant, self.kind, self.modulus, not self.positive)

    def size(self) -> int:
        n = 1 + len(self.coeffs) + (1 if self.constant else 0)
        return n + (0 if self.positive else 1)

    def variables(self) -> frozenset[str]:
        return frozenset(v for v, _ in self.coeffs)

    def __str__(self):
        lhs = " + ".join(f"{a}*{v}" for v, a in self.coeffs) or "0"
        if self.constant:
            lhs += f" + {self.constant}"
        body = {"eq": f"{lhs} = 0", "le": f"{lhs} <= 0", "dvd": f"{self.modulus} dvd {lhs}"}[self.kind]
        return body if self.positive else f"!({body})"


def _canon_coeffs(coeffs: Mapping[str, int] | Iterable[tuple[str, int]]) -> tuple[tuple[str, int], ...]:
    items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
    acc: dict[str, int] = {}
    for v, a in items:
        acc[v] = acc.get(v, 0) + a
    return tuple(sorted((v, a) for v, a in acc.items() if a != 0))


def linear_eq(coeffs, constant: int = 0) -> LinearAtom:
    return LinearAtom(_canon_coeffs(coeffs), constant, "eq")


def linear_le(coeffs, constant: int = 0) -> LinearAtom:
    return LinearAtom(_canon_coeffs(coeffs), constant, "le")


def linear_dvd(modulus: int, coeffs, constant: int = 0) -> LinearAtom:
    return LinearAtom(_canon_coeffs(coeffs), constant, "dvd", modulus)


@dataclass(frozen=True)
class LIAProblem:
    """A conjunction of positive linear atoms, plus variables pinned >= 0."""

    atoms: tuple[LinearAtom, ...]
    nonneg: frozenset[str] = frozenset()


def eval_linear_atom(atom: LinearAtom, model: Mapping[str, int]) -> bool:
    value = atom.constant + sum(a * model[v] for v, a in atom.coeffs)
    if atom.kind == "eq":
        out = value == 0
    elif atom.kind == "le":
        out = value <= 0
    else:
        out = value % atom.modulus == 0
    return out if atom.positive else not out


def eval_linear_formula(f: QFFormula, model: Mapping[str, int]) -> bool:
    from .formula import And, Atom, Not, Or

    if isinstance(f, Atom):
        return eval_linear_atom(f.literal, model)
    if isinstance(f, Not):
        return not eval_linear_formula(f.inner, model)
    if isinstance(f, And):
        return all(eval_linear_formula(p, model) for p in f.parts)
    if isinstance(f, Or):
        return any(eval_linear_formula(p, model) for p in f.parts)
    raise MalformedInputError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# Exact phase-1 simplex


def _lp_feasible(
    eq_rows: list[tuple[dict[str, int], int]],
    le_rows: list[tuple[dict[str, int], int]],
    nonneg: frozenset[str],
    variables: list[str],
) -> dict[str, Fraction] | None:
    """Rational feasibility of rows in atom convention:
    ``sum(a x) + c = 0`` (eq) and ``sum(a x) + c <= 0`` (le).

    Returns one feasible point, or None.  Free variables are split into
    differences of nonnegatives.  The phase-1 simplex keeps an integer
    tableau (one denominator per row) so no Fraction arithmetic happens in
    the pivot loop; Bland's rule guarantees termination.
    """
    cols: list[tuple[str, int]] = []  # (var, sign)
    for v in variables:
        cols.append((v, 1))
        if v not in nonneg:
            cols.append((v, -1))
    ncols = len(cols)
    n_le = len(le_rows)
    m = n_le + len(eq_rows)
    if m == 0:
        return {v: Fraction(0) for v in variables}

    # columns: vars, slacks for le rows, artificials, rhs
    total = ncols + n_le + m
    tab: list[list[int]] = []
    den = [1] * m
    for i, (coeffs, c) in enumerate(list(le_rows) + list(eq_rows)):
        row = [sign * coeffs.get(v, 0) for v, sign in cols] + [0] * (n_le + m + 1)
        if i < n_le:
            row[ncols + i] = 1
        row[total] = -c
        if row[total] < 0:
            row = [-x for x in row]
        row[ncols + n_le + i] = 1
        tab.append(row)

    basis = [ncols + n_le + i for i in range(m)]
    # phase-1 objective: minimize the artificials; z-row = -sum of rows
    z = [0] * (total + 1)
    for row in tab:
        for j in range(total + 1):
            z[j] -= row[j]
    for i in range(m):
        z[ncols + n_le + i] = 0

    while True:
        enter = -1
        for j in range(total):
            if z[j] < 0:  # z denominator is positive by construction
                enter = j
                break
        if enter < 0:
            break
        # ratio test: rhs_i / a_ie with the row denominators cancelling
        leave = -1
        for i in range(m):
            a = tab[i][enter]
            if a > 0:
                if leave < 0:
                    leave = i
                else:
                    lhs = tab[i][total] * tab[leave][enter]
                    rhs = tab[leave][total] * a
                    if lhs < rhs or (lhs == rhs and basis[i] < basis[leave]):
                        leave = i
        if leave < 0:
            # phase-1 objective is bounded; unreachable
            return None
        p = tab[leave][enter]
        prow = tab[leave]
        for i in range(m):
            if i != leave:
                f = tab[i][enter]
                if f:
                    row = tab[i]
                    tab[i] = row = [a * p - f * b for a, b in zip(row, prow)]
                    den[i] *= p
                    g = den[i]
                    for a in row:
                        if a:
                            g = gcd(g, a)
                            if g == 1:
                                break
                    if g > 1:
                        den[i] //= g
                        tab[i] = [a // g for a in row]
        f = z[enter]
        if f:
            z = [a * p - f * b for a, b in zip(z, prow)]
            # the z denominator only matters for signs; reduce to tame growth
            g = 0
            for a in z:
                if a:
                    g = gcd(g, a)
            if g > 1:
                z = [a // g for a in z]
        basis[leave] = enter

    if z[total] != 0:  # leftover artificial infeasibility (w = -z/zden != 0)
        return None

    values = [Fraction(0)] * total
    for i, b in enumerate(basis):
        if b < total:
            values[b] = Fraction(tab[i][total], tab[i][b])
        elif tab[i][total] != 0:
            return None  # artificial stuck at a nonzero level
    point: dict[str, Fraction] = {v: Fraction(0) for v in variables}
    for j, (v, sign) in enumerate(cols):
        point[v] += sign * values[j]
    return point


# ---------------------------------------------------------------------------
# Preprocessing


def _normalize_eq(coeffs: dict[str, int], c: int):
    """Divide an equality through by the gcd; None signals unsat."""
    nz = {v: a for v, a in coeffs.items() if a}
    if not nz:
        return ({}, 0) if c == 0 else None
    g = 0
    for a in nz.values():
        g = gcd(g, abs(a))
    if c % g != 0:
        return None
    return ({v: a // g for v, a in nz.items()}, c // g)


def _tighten_le(coeffs: dict[str, int], c: int):
    """gcd-tighten sum(a x) + c <= 0; None signals unsat, () trivially true."""
    nz = {v: a for v, a in coeffs.items() if a}
    if not nz:
        return () if c <= 0 else None
    g = 0
    for a in nz.values():
        g = gcd(g, abs(a))
    # sum(a/g x) <= floor(-c/g)
    bound = floor(Fraction(-c, g))
    return ({v: a // g for v, a in nz.items()}, -bound)


def _small_solution_box(n_vars: int, rows: list[tuple[dict[str, int], int]]) -> int:
    """Branching box radius from the classical small-model bound for
    integer linear systems; generous and only a termination device."""
    m = max(1, len(rows))
    amax = 1
    for coeffs, c in rows:
        for a in coeffs.values():
            amax = max(amax, abs(a))
        amax = max(amax, abs(c))
    return (n_vars + m + 2) * (m * amax + 2) ** (2 * m + 1)


def lia_sat(problem: LIAProblem, node_limit: int = DEFAULT_NODE_LIMIT) -> SolveResult:
    """Decide a conjunction of positive linear atoms over the integers."""
    for atom in problem.atoms:
        if not atom.positive:
            raise MalformedInputError("lia_sat takes positive atoms; negations are expanded upstream")
        for _, a in atom.coeffs:
            if abs(a) > COEFF_BOUND:
                raise MalformedInputError("coefficient magnitude exceeds the documented bound")

    eqs: list[tuple[dict[str, int], int]] = []
    les: list[tuple[dict[str, int], int]] = []
    fresh = itertools.count()
    for atom in problem.atoms:
        coeffs = dict(atom.coeffs)
        if atom.kind == "dvd":
            q = f"q!{next(fresh)}"
            coeffs[q] = -atom.modulus
            eqs.append((coeffs, atom.constant))
        elif atom.kind == "eq":
            eqs.append((coeffs, atom.constant))
        else:
            les.append((coeffs, atom.constant))
    for v in problem.nonneg:
        les.append(({v: -1}, 0))

    original_vars = sorted(
        {v for atom in problem.atoms for v in atom.variables()} | set(problem.nonneg)
    )

    # substitute away unit-coefficient equalities
    substitutions: list[tuple[str, dict[str, int], int]] = []
    while True:
        norm = []
        for coeffs, c in eqs:
            out = _normalize_eq(coeffs, c)
            if out is None:
                return unsat()
            if out[0]:
                norm.append(out)
        eqs = norm
        pick = None
        for i, (coeffs, c) in enumerate(eqs):
            units = [v for v, a in coeffs.items() if abs(a) == 1]
            if units:
                pick = (i, min(units))
                break
        if pick is None:
            break
        i, var = pick
        coeffs, c = eqs.pop(i)
        a = coeffs[var]
        # var = -(rest + c)/a  with a = +-1
        expr = {v: -x * a for v, x in coeffs.items() if v != var}
        expr_c = -c * a
        substitutions.append((var, expr, expr_c))

        def subst(rows, var=var, expr=expr, expr_c=expr_c):
            out = []
            for cf, cc in rows:
                cf = dict(cf)
                k = cf.pop(var, 0)
                if k:
                    for v, x in expr.items():
                        cf[v] = cf.get(v, 0) + k * x
                    cc += k * expr_c
                out.append((cf, cc))
            return out

        eqs = subst(eqs)
        les = subst(les)

    tight = []
    for coeffs, c in les:
        out = _tighten_le(coeffs, c)
        if out is None:
            return unsat()
        if out != ():
            tight.append(out)
    les = tight

    live = sorted({v for coeffs, _ in eqs + les for v in coeffs})
    box = _small_solution_box(len(live), eqs + les)

    # branch and bound on the exact LP relaxation; per-variable bound maps
    # keep every node's LP the same size
    stack: list[dict[str, tuple[int | None, int | None]]] = [{}]
    nodes = 0
    capped = False
    while stack:
        bounds = stack.pop()
        nodes += 1
        if nodes > node_limit:
            capped = True
            break
        extra = []
        for v, (lb, ub) in bounds.items():
            if lb is not None:
                extra.append(({v: -1}, lb))   # v >= lb
            if ub is not None:
                extra.append(({v: 1}, -ub))   # v <= ub
        point = _lp_feasible(eqs, les + extra, problem.nonneg, live)
        if point is None:
            continue
        frac_var, frac_dist = None, Fraction(0)
        for v in live:  # sorted: the first maximum wins, so ties break by name
            d = abs(point[v] - Fraction(round(point[v])))
            if d > frac_dist:
                frac_var, frac_dist = v, d
        if frac_dist == 0:
            model = {v: int(point[v]) for v in live}
            return sat(_reconstruct(model, substitutions, original_vars, problem))
        v = frac_var
        lo, hi = floor(point[v]), ceil(point[v])
        lb, ub = bounds.get(v, (None, None))
        up = dict(bounds)  # v >= hi, explored after the round-down branch
        new_lb = hi if lb is None else max(lb, hi)
        if hi <= box and (ub is None or new_lb <= ub):
            up[v] = (new_lb, ub)
            stack.append(up)
        down = dict(bounds)  # v <= lo
        new_ub = lo if ub is None else min(ub, lo)
        if lo >= -box and (lb is None or lb <= new_ub):
            down[v] = (lb, new_ub)
            stack.append(down)
    if capped:
        return unknown("branch-and-bound node limit reached")
    return unsat()


def _reconstruct(model: dict[str, int], substitutions, original_vars, problem: LIAProblem) -> dict[str, int]:
    full = dict(model)
    for var, expr, c in reversed(substitutions):
        full[var] = c + sum(a * full.get(v, 0) for v, a in expr.items())
    out = {v: full.get(v, 0) for v in original_vars}
    for atom in problem.atoms:
        if not eval_linear_atom(atom, out):
            raise AssertionError(f"internal: model fails {atom}")
    return out


# ---------------------------------------------------------------------------
# Boolean combinations


def _expand_negative(atom: LinearAtom) -> list[list[LinearAtom]]:
    """DNF of the negation of a positive atom (list of conjunctions)."""
    coeffs, c = atom.coeffs, atom.constant
    neg_coeffs = tuple((v, -a) for v, a in coeffs)
    if atom.kind == "le":
        return [[LinearAtom(neg_coeffs, 1 - c, "le")]]
    if atom.kind == "eq":
        return [
            [LinearAtom(coeffs, c + 1, "le")],       # L <= -1
            [LinearAtom(neg_coeffs, 1 - c, "le")],   # L >= 1
        ]
    m = atom.modulus
    return [[LinearAtom(coeffs, c - r, "dvd", m)] for r in range(1, m)]


def clause_problems(literals: Iterable[LinearAtom], nonneg: frozenset[str]) -> Iterator[LIAProblem]:
    """All conjunction problems covering one DNF clause (negations expanded)."""
    fixed: list[LinearAtom] = []
    choices: list[list[list[LinearAtom]]] = []
    for lit in literals:
        if lit.positive:
            fixed.append(lit)
        else:
            alts = _expand_negative(lit.negated())
            if not alts:
                return
            choices.append(alts)
    for combo in itertools.product(*choices):
        atoms = list(fixed)
        for alt in combo:
            atoms.extend(alt)
        yield LIAProblem(tuple(atoms), nonneg)


def lia_sat_formula(
    f: QFFormula,
    nonneg: frozenset[str] = frozenset(),
    node_limit: int = DEFAULT_NODE_LIMIT,
) -> SolveResult:
    """Decide a boolean combination of linear atoms by streaming its DNF."""
    saw_unknown = False
    for clause in to_dnf(f):
        for problem in clause_problems(clause.literals, nonneg):
            r = lia_sat(problem, node_limit=node_limit)
            if r.is_sat:
                return r
            if r.is_unknown:
                saw_unknown = True
    if saw_unknown:
        return unknown("a clause hit the search limit")
    return unsat()
