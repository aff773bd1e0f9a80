"""Uniform solver verdicts.

Every decision procedure in the package answers sat, unsat, or unknown.
``unknown`` is a first-class outcome (resource limits, oracle gaps); it is
never silently collapsed into unsat.
"""

from __future__ import annotations

from dataclasses import dataclass

SAT = "sat"
UNSAT = "unsat"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class SolveResult:
    status: str
    model: object | None = None
    certificate: object | None = None
    reason: str | None = None

    def __post_init__(self):
        if self.status not in (SAT, UNSAT, UNKNOWN):
            raise ValueError(f"bad status {self.status!r}")
        if self.status == SAT and self.model is None:
            raise ValueError("sat verdict requires a model")

    @property
    def is_sat(self) -> bool:
        return self.status == SAT

    @property
    def is_unsat(self) -> bool:
        return self.status == UNSAT

    @property
    def is_unknown(self) -> bool:
        return self.status == UNKNOWN


def sat(model, certificate=None) -> SolveResult:
    return SolveResult(SAT, model=model, certificate=certificate)


def unsat() -> SolveResult:
    return SolveResult(UNSAT)


def unknown(reason: str) -> SolveResult:
    return SolveResult(UNKNOWN, reason=reason)


@dataclass(frozen=True)
class CheckResult:
    """Outcome of a certificate check: accept, or reject with a reason."""

    accepted: bool
    reason: str | None = None

    def __bool__(self) -> bool:
        return self.accepted


ACCEPT = CheckResult(True)


def reject(reason: str) -> CheckResult:
    return CheckResult(False, reason)
