"""Certificate mutations that are provably invalidating.

Used to exercise the certificate checkers: every mutation produced here
flips one discrete piece of an accepted certificate in a way that is
guaranteed (not merely likely) to break it, so a checker that accepts any
of them is buggy.

* Partition certificates: flipping one literal's polarity changes the set
  of negated-literal positions, so the recorded partition can no longer
  cover it exactly.
* Support certificates: flipping one region bit pins that region's tuple
  to the opposite polarity of one definition, which the tuple's fixed
  values cannot satisfy; perturbing the default tuple so that its induced
  region moves away from a still-populated leftover region breaks the
  confinement (or the coupled query) for cover bit 0.
"""

from __future__ import annotations

from typing import Iterator

from .oracles import FiniteStructureOracle
from .power_solver import PartitionCertificate
from .qfbapai import (
    QFBAPAIProblem, RegionPattern, SupportCertificate, component_env, induced_pattern,
)
from .formula import Clause


def power_certificate_mutations(
    cert: PartitionCertificate,
) -> Iterator[PartitionCertificate]:
    for k in range(len(cert.clause.literals)):
        lits = list(cert.clause.literals)
        lits[k] = lits[k].negated()
        yield PartitionCertificate(
            Clause(tuple(lits)), cert.partition, cert.model0, cert.part_models
        )


def qfbapai_certificate_mutations(
    p: QFBAPAIProblem, cert: SupportCertificate,
) -> Iterator[SupportCertificate]:
    k = len(p.set_vars)
    for i in range(len(cert.regions)):
        for j in range(k):
            regions = list(cert.regions)
            bits = list(regions[i].bits)
            bits[j] ^= 1
            regions[i] = RegionPattern(tuple(bits))
            if regions[i] in cert.regions:
                continue  # collides with another region: structural reject, skip
            yield SupportCertificate(
                tuple(regions), cert.cover_bit, cert.component_model, cert.set_model
            )
    if cert.cover_bit == 0:
        n = cert.set_model.maxc
        support_bits = {beta.bits for beta in cert.regions}
        stray = [
            r for r in range(n)
            if tuple(1 if r in cert.set_model.sets.get(s, ()) else 0 for s in p.set_vars)
            not in support_bits
        ]
        if not stray:
            return
        beta0 = induced_pattern(p, component_env(p, cert.component_model, 0))
        if isinstance(p.oracle, FiniteStructureOracle):
            candidates = range(p.oracle.structure.carrier_size)
        else:
            candidates = (-2, -1, 0, 1, 2)
        for x in p.arrays:
            name = f"{x}@0"
            cur = cert.component_model.get(name, 0)
            for v in candidates:
                if v == cur:
                    continue
                model = dict(cert.component_model)
                model[name] = v
                if induced_pattern(p, component_env(p, model, 0)) == beta0:
                    continue
                yield SupportCertificate(
                    cert.regions, cert.cover_bit, model, cert.set_model
                )
