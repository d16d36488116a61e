"""Chern numbers and the index of a Galois cover from branch-curve data.

For a generic projection of degree ``n`` with branch curve of degree ``m``
having ``d`` nodes and ``rho`` cusps, the Galois cover satisfies

    C1^2 = n! (m - 6)^2 / 4
    C2   = n! (m^2/2 - 3m/2 + 3 - 3d/4 - 4 rho/3)
    tau  = (C1^2 - 2 C2) / 3

Everything is computed with exact rationals; a non-integral result is an
error, since it can only come from inconsistent input data.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial


class NonIntegralError(ValueError):
    """An invariant came out fractional."""


@dataclass(frozen=True)
class BranchData:
    n: int          # sheets of the projection
    m: int          # degree of the branch curve
    d: int          # nodes
    rho: int        # cusps
    mu: int = 0     # tangencies (recorded, not used by the formulas)

    def __post_init__(self):
        for name in ("n", "m", "d", "rho", "mu"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 0:
                raise ValueError(f"{name} must be a nonnegative integer, got {v!r}")
        if self.n < 1:
            raise ValueError("n must be at least 1")


@dataclass(frozen=True)
class Invariant:
    """An exact value together with its coefficient of ``n!``."""

    name: str
    value: int
    coefficient: Fraction
    n: int

    def factored(self) -> str:
        c = self.coefficient
        coef = str(c.numerator) if c.denominator == 1 else f"({c})"
        return f"{coef} * {self.n}!"

    @property
    def sign(self) -> int:
        return (self.value > 0) - (self.value < 0)


def _integral(name: str, value: Fraction) -> int:
    if value.denominator != 1:
        raise NonIntegralError(f"{name} = {value} is not an integer; check the input data")
    return value.numerator


def c1_squared_coefficient(b: BranchData) -> Fraction:
    return Fraction((b.m - 6) ** 2, 4)


def c2_coefficient(b: BranchData) -> Fraction:
    m = Fraction(b.m)
    return m * m / 2 - 3 * m / 2 + 3 - Fraction(3 * b.d, 4) - Fraction(4 * b.rho, 3)


def chern_c1_sq(b: BranchData) -> Invariant:
    coef = c1_squared_coefficient(b)
    return Invariant("C1^2", _integral("C1^2", factorial(b.n) * coef), coef, b.n)


def chern_c2(b: BranchData) -> Invariant:
    coef = c2_coefficient(b)
    return Invariant("C2", _integral("C2", factorial(b.n) * coef), coef, b.n)


def index_tau(b: BranchData) -> Invariant:
    c1 = chern_c1_sq(b)
    c2 = chern_c2(b)
    value = Fraction(c1.value - 2 * c2.value, 3)
    coef = (c1.coefficient - 2 * c2.coefficient) / 3
    return Invariant("tau", _integral("tau", value), coef, b.n)


def all_invariants(b: BranchData) -> tuple[Invariant, Invariant, Invariant]:
    return chern_c1_sq(b), chern_c2(b), index_tau(b)


def singularity_counts(f) -> dict[int, int]:
    """Factor counts by exponent (1 branch points, 2 nodes, 3 cusps) of a
    resolved factorization; a bookkeeping cross-check only."""
    counts: dict[int, int] = {}
    for fac in f.factors:
        e = getattr(fac, "exponent", None)
        if e is not None:
            counts[e] = counts.get(e, 0) + 1
    return dict(sorted(counts.items()))
