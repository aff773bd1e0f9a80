"""Deterministic satisfiability for quantifier-free formulas over a power
of a component structure.

A DNF clause holds in the power iff its positive literals hold at every
index and its negative literals can be distributed over at most |I|
indices: a partition of the negated literals into t <= |I| parts, where
each part d (conjoined with all positives) is satisfiable in the
component.  The solver streams clauses, tries the all-singletons partition
first, and falls back to enumerating set partitions with few parts when
the index set is smaller than the number of negated literals.

The certificate checker applies the gate ``reject iff t > |I|``: a
partition needs t distinct indices (the printed description of the gate
reads the other way around; see the logged note).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

from .formula import Atom, Clause, Not, QFFormula, conj, free_vars, to_dnf
from .oracles import ComponentOracle
from .result import ACCEPT, CheckResult, SolveResult, reject, sat, unknown, unsat
from .structures import Finite, IndexCard

log = logging.getLogger("powsat.power")


@dataclass(frozen=True)
class PowerProblem:
    oracle: ComponentOracle
    index_card: IndexCard
    formula: QFFormula


@dataclass(frozen=True)
class PartitionCertificate:
    """Satisfiability witness: one DNF clause, a partition of its negated
    literals (positions into ``clause.literals``), and component models
    for the positive part and for each partition part."""

    clause: Clause
    partition: tuple[tuple[int, ...], ...]
    model0: Mapping[str, object]
    part_models: tuple[Mapping[str, object], ...]


@dataclass(frozen=True)
class PowerModel:
    """A power assignment as a default column plus exceptional columns.

    Finite powers materialize through :meth:`vectors`; unbounded powers
    keep this finite description (at most t exceptions).
    """

    default: Mapping[str, object]
    exceptions: tuple[tuple[int, Mapping[str, object]], ...]

    def vectors(self, n: int) -> dict[str, tuple]:
        exc = dict(self.exceptions)
        out = {}
        for v in self.default:
            out[v] = tuple(exc[i][v] if i in exc else self.default[v] for i in range(n))
        return out


def clause_part_formula(clause: Clause, negative_positions: Sequence[int]) -> QFFormula:
    """Positives of the clause conjoined with the selected negated literals."""
    parts = []
    for i, lit in enumerate(clause.literals):
        if lit.positive:
            parts.append(Atom(lit))
    for e in negative_positions:
        lit = clause.literals[e]
        parts.append(Not(Atom(lit.negated())))
    return conj(*parts)


def _partitions_into(items: Sequence[int], k: int) -> Iterator[list[list[int]]]:
    """Set partitions of ``items`` into exactly k nonempty parts,
    enumerated deterministically via restricted growth strings."""
    n = len(items)
    if k > n:
        return
    codes = [0] * n

    def rec(i: int, used: int):
        if n - i < k - used:
            return
        if i == n:
            if used == k:
                parts: list[list[int]] = [[] for _ in range(k)]
                for j, c in enumerate(codes):
                    parts[c].append(items[j])
                yield parts
            return
        for c in range(min(i, used) + 1):
            if c > used:
                break
            codes[i] = c
            yield from rec(i + 1, max(used, c + 1))

    yield from rec(0, 0)


def _complete(model: Mapping, variables) -> dict:
    return {v: model.get(v, 0) for v in variables}


def assemble_model(
    clause: Clause,
    partition: Sequence[Sequence[int]],
    model0: Mapping,
    part_models: Sequence[Mapping],
    index_card: IndexCard,
) -> PowerModel:
    """Columns i_d = d carry part d's model; every other column carries the
    positive-part model.  The result satisfies the clause in the power."""
    t = len(partition)
    if isinstance(index_card, Finite) and t > index_card.n:
        raise ValueError("more parts than indices")
    variables = sorted(free_vars(clause.to_formula()))
    default = _complete(model0, variables)
    exceptions = tuple((d, _complete(part_models[d], variables)) for d in range(t))
    return PowerModel(default=default, exceptions=exceptions)


def solve_power(p: PowerProblem) -> SolveResult:
    """sat/unsat/unknown for the power problem; sat carries a PowerModel
    and the PartitionCertificate that witnesses it."""
    card = p.index_card
    n = card.n if isinstance(card, Finite) else None
    unknown_seen = False

    for clause in to_dnf(p.formula):
        memo: dict[tuple[int, ...], SolveResult] = {}

        def decide(positions: tuple[int, ...], clause=clause, memo=memo) -> SolveResult:
            if positions in memo:
                return memo[positions]
            # a part whose negated literals contain a known-unsat subset is unsat
            for known, res in memo.items():
                if res.is_unsat and set(known) <= set(positions):
                    memo[positions] = res
                    return res
            r = p.oracle.decide(clause_part_formula(clause, positions))
            memo[positions] = r
            return r

        r0 = decide(())
        if r0.is_unknown:
            unknown_seen = True
            continue
        if r0.is_unsat:
            continue
        negatives = [i for i, lit in enumerate(clause.literals) if not lit.positive]
        t = len(negatives)

        singleton_models = {}
        clause_unsat = False
        clause_unknown = False
        for e in negatives:
            r = decide((e,))
            if r.is_unsat:
                clause_unsat = True
                break
            if r.is_unknown:
                clause_unknown = True
                break
            singleton_models[e] = r.model
        if clause_unsat:
            continue
        if clause_unknown:
            unknown_seen = True
            continue

        if n is None or t <= n:
            partition = tuple((e,) for e in negatives)
            part_models = tuple(singleton_models[e] for e in negatives)
            cert = PartitionCertificate(clause, partition, r0.model, part_models)
            return sat(assemble_model(clause, partition, r0.model, part_models, card), cert)

        # fewer indices than negated literals: group them
        found = None
        for k in range(1, n + 1):
            for parts in _partitions_into(negatives, k):
                models = []
                for part in parts:
                    r = decide(tuple(part))
                    if not r.is_sat:
                        if r.is_unknown:
                            clause_unknown = True
                        models = None
                        break
                    models.append(r.model)
                if models is not None:
                    found = (tuple(tuple(q) for q in parts), tuple(models))
                    break
            if found:
                break
        if found:
            partition, part_models = found
            cert = PartitionCertificate(clause, partition, r0.model, part_models)
            return sat(assemble_model(clause, partition, r0.model, part_models, card), cert)
        if clause_unknown:
            unknown_seen = True

    if unknown_seen:
        return unknown("an oracle call could not be decided")
    return unsat()


def check_certificate(p: PowerProblem, cert: PartitionCertificate) -> CheckResult:
    """Accept iff the clause is a DNF disjunct of the problem formula, the
    partition covers its negated literals with t <= |I| parts, and every
    component model passes the oracle's model check."""
    if not isinstance(cert, PartitionCertificate):
        return reject("not a partition certificate")
    lits = cert.clause.literals
    negatives = {i for i, lit in enumerate(lits) if not lit.positive}
    seen: set[int] = set()
    for part in cert.partition:
        if not part:
            return reject("empty partition part")
        for e in part:
            if not isinstance(e, int) or e not in negatives:
                return reject(f"partition entry {e!r} is not a negated literal position")
            if e in seen:
                return reject(f"literal position {e} in two parts")
            seen.add(e)
    if seen != negatives:
        return reject("partition does not cover the negated literals")

    t = len(cert.partition)
    if isinstance(p.index_card, Finite) and t > p.index_card.n:
        log.debug(
            "partition gate: t=%d > |I|=%d, rejecting (gate is t > |I|, "
            "not the printed t <= |I|)", t, p.index_card.n,
        )
        return reject(f"partition with {t} parts needs {t} indices, universe has {p.index_card.n}")

    key = cert.clause.key()
    for candidate in to_dnf(p.formula):
        if candidate.key() == key:
            break
    else:
        return reject("clause is not a disjunct of the formula's DNF")

    if len(cert.part_models) != t:
        return reject("one model required per partition part")
    if not p.oracle.model_check(clause_part_formula(cert.clause, ()), cert.model0):
        return reject("positive-part model fails")
    for d, part in enumerate(cert.partition):
        if not p.oracle.model_check(clause_part_formula(cert.clause, part), cert.part_models[d]):
            return reject(f"model for part {d} fails")
    return ACCEPT
