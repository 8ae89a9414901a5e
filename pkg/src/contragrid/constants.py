"""Exact constant ledger and rational lambda-constraint checking.

Every constant is an exact integer and every constraint bound an exact
Fraction; no floating point enters this module.  The constraint list
gathers the scattered smallness conditions on lambda, each instantiated
with the K value its source statement uses, so a single check decides
whether a given lambda satisfies all of them simultaneously.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import prod

from .combinatorics import kkr_constant

C1 = kkr_constant(15, 2)
C2 = 100_000
C3 = 240_000_000_000
C31 = 19_000_000_000
C32 = 3_100_000_000
C33 = 1_029_000_000
C34 = 147_000_000
C35 = 21_000_000
C36 = 3_000_000
C37 = 100_000
C4 = 16 * C3
C5 = 1000 * C3

LAMBDA_STAR = Fraction(1, 10**23)


@dataclass(frozen=True)
class Constraint:
    """lambda must be strictly below 1 / (product of factors).

    ``factors`` keeps the denominator symbolic as (name, value) pairs so
    reports can show which factor dominates.
    """

    label: str
    factors: tuple
    k_value: int | None

    @property
    def bound(self) -> Fraction:
        return Fraction(1, prod(v for _, v in self.factors))


@dataclass(frozen=True)
class Ledger:
    c1: int
    c2: int
    c3: int
    c3_sub: tuple
    c4: int
    c5: int
    lambda_star: Fraction
    constraints: tuple

    def binding(self) -> Constraint:
        """Constraint with the smallest bound (first on ties)."""
        best = self.constraints[0]
        for c in self.constraints[1:]:
            if c.bound < best.bound:
                best = c
        return best

    def constraint(self, label: str) -> Constraint:
        for c in self.constraints:
            if c.label == label:
                return c
        raise KeyError(label)


def build_ledger() -> Ledger:
    """Instantiate every constant and the full lambda-constraint list."""
    constraints = (
        Constraint("wtps", (("24", 24), ("K", 1)), 1),
        Constraint("tps", (("820", 820), ("C1", C1), ("K", 1)), 1),
        Constraint("neighdiam", (("41", 41), ("K", 1), ("C1", C1)), 1),
        Constraint("n1neigh_a", (("78", 78), ("K", 1)), 1),
        Constraint("n1neigh_b", (("13", 13), ("C1", C1)), None),
        Constraint("ex1", (("5e12", 5 * 10**12),), None),
        Constraint("ex2", (("7380", 7380), ("C1", C1), ("C3,1", C31)), None),
        Constraint("closecase", (("34440", 34440), ("C1", C1), ("C3", C3)), None),
        Constraint("farcase", (("8200000", 8_200_000), ("C1", C1), ("C3", C3)), None),
        Constraint("casescor", (("10", 10), ("K", 2), ("C1", C1)), 2),
    )
    return Ledger(
        c1=C1,
        c2=C2,
        c3=C3,
        c3_sub=(C31, C32, C33, C34, C35, C36, C37),
        c4=C4,
        c5=C5,
        lambda_star=LAMBDA_STAR,
        constraints=constraints,
    )


@dataclass(frozen=True)
class ConstraintCheck:
    label: str
    bound: Fraction
    ok: bool


@dataclass(frozen=True)
class LambdaVerdict:
    lam: Fraction
    checks: tuple
    ok: bool

    def failing(self) -> tuple:
        return tuple(c.label for c in self.checks if not c.ok)


def check_lambda(ledger: Ledger, lam) -> LambdaVerdict:
    """Exact strict comparison of lambda against every constraint.

    Accepts any value Fraction() can take exactly (int, Fraction,
    Decimal, numeric string); floats are rejected since the binding
    bounds lie near the resolution where binary rounding flips verdicts.
    """
    if isinstance(lam, float):
        raise TypeError(
            "lambda must be exact (Fraction, int, or string); "
            "convert explicitly if a float is really intended"
        )
    lam = Fraction(lam)
    if lam <= 0:
        raise ValueError(f"lambda must be > 0, got {lam}")
    checks = tuple(
        ConstraintCheck(c.label, c.bound, lam < c.bound) for c in ledger.constraints
    )
    return LambdaVerdict(lam=lam, checks=checks, ok=all(c.ok for c in checks))


def ledger_to_json_dict(ledger: Ledger) -> dict:
    return {
        "C1": ledger.c1,
        "C2": ledger.c2,
        "C3": ledger.c3,
        "C3_sub": list(ledger.c3_sub),
        "C4": ledger.c4,
        "C5": ledger.c5,
        "lambda_star": str(ledger.lambda_star),
        "constraints": [
            {
                "label": c.label,
                "factors": [[name, value] for name, value in c.factors],
                "K": c.k_value,
                "bound": str(c.bound),
                "bound_float": float(c.bound),
            }
            for c in ledger.constraints
        ],
        "binding": ledger.binding().label,
    }


def verdict_to_json_dict(verdict: LambdaVerdict) -> dict:
    return {
        "lambda": str(verdict.lam),
        "ok": verdict.ok,
        "checks": [
            {"label": c.label, "bound": str(c.bound), "ok": c.ok}
            for c in verdict.checks
        ],
        "failing": list(verdict.failing()),
    }
