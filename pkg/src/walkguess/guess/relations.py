"""Relation types produced by the guessers.

All three linear-algebra relations share one representation: a tuple of
integer polynomials, one per basis element (shift, power of C, or
derivative order), stored in canonical form: joint content 1, top
coefficient polynomial with positive leading coefficient, trailing zero
polynomials stripped.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Sequence

from ..arith.poly import UniPoly, content


class TrivialRelation(ValueError):
    """The zero relation (or one with no unknown at all) was constructed."""


def canonical_coeffs(polys: Sequence[UniPoly], var: str) -> tuple[UniPoly, ...]:
    polys = list(polys)
    while polys and polys[-1].is_zero():
        polys.pop()
    if not polys:
        raise TrivialRelation("the zero relation is not a relation")
    den = lcm(*(c.denominator for p in polys for c in p.coeffs))
    ints = [[(c * den).numerator for c in p.coeffs] for p in polys]
    g = content(x for row in ints for x in row)
    sign = -1 if ints[-1][-1] < 0 else 1
    return tuple(UniPoly([sign * x // g for x in row], var) for row in ints)


class _LinearRelation:
    var = "n"
    coeffs: tuple[UniPoly, ...]

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def degree(self) -> int:
        return max(p.degree for p in self.coeffs)

    @property
    def shape(self) -> tuple[int, int]:
        return self.order, self.degree

    def int_coeffs(self) -> list[list[int]]:
        return [p.int_coeffs() for p in self.coeffs]

    def __str__(self) -> str:
        from .grammar import format_relation
        return format_relation(self)


@dataclass(frozen=True, eq=False)
class Recurrence(_LinearRelation):
    """``sum_i q_i(n) c(n+i) = 0`` for n >= offset.

    ``initial`` holds c(0..order-1); ``extra`` holds values at indices
    ``n + order`` where ``q_order(n) = 0`` (recorded in ``exceptional``).
    """

    coeffs: tuple[UniPoly, ...]
    initial: tuple[Fraction, ...] = ()
    offset: int = 0
    exceptional: tuple[int, ...] = ()
    extra: tuple[tuple[int, Fraction], ...] = ()
    var = "n"

    def __post_init__(self):
        object.__setattr__(self, "coeffs", canonical_coeffs(self.coeffs, "n"))
        object.__setattr__(self, "initial", tuple(Fraction(v) for v in self.initial))

    def residual(self, terms: Sequence, n: int):
        return sum(q(n) * terms[n + i] for i, q in enumerate(self.coeffs) if q.coeffs)

    def last_index(self, nterms: int) -> int:
        return nterms - 1 - self.order

    def __eq__(self, other) -> bool:
        return isinstance(other, Recurrence) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(("rec", self.coeffs))


@dataclass(frozen=True, eq=False)
class DifferentialRelation(_LinearRelation):
    """``sum_i r_i(t) (d/dt)^i C(t) = 0``."""

    coeffs: tuple[UniPoly, ...]
    var = "t"

    def __post_init__(self):
        object.__setattr__(self, "coeffs", canonical_coeffs(self.coeffs, "t"))
        if len(self.coeffs) < 2:
            # r(t) C = 0 forces C = 0
            raise TrivialRelation("a differential relation needs a derivative of C")

    @property
    def initial_conditions(self) -> int:
        return self.order

    def residual(self, terms: Sequence, k: int):
        """Coefficient of t^k in the left-hand side."""
        acc = 0
        for i, r in enumerate(self.coeffs):
            for j, a in enumerate(r.coeffs):
                m = k - j
                if a and m >= 0:
                    acc += a * falling_rise(m, i) * terms[m + i]
        return acc

    def last_index(self, nterms: int) -> int:
        return nterms - 1 - self.order

    def __eq__(self, other) -> bool:
        return isinstance(other, DifferentialRelation) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(("ode", self.coeffs))


@dataclass(frozen=True, eq=False)
class AlgebraicRelation(_LinearRelation):
    """``sum_i p_i(t) C(t)^i = 0`` with ``p_d != 0`` and ``d >= 1``."""

    coeffs: tuple[UniPoly, ...]
    var = "t"

    def __post_init__(self):
        object.__setattr__(self, "coeffs", canonical_coeffs(self.coeffs, "t"))
        if len(self.coeffs) < 2:
            raise TrivialRelation("an algebraic relation needs a positive power of C")

    def residual(self, terms: Sequence, k: int):
        return self.residuals(terms, k, k)[0]

    def residuals(self, terms: Sequence, start: int, stop: int) -> list:
        """Coefficients t^start..t^stop of the left-hand side."""
        n = stop + 1
        base = list(terms[:n])
        power = [1] + [0] * (n - 1)
        total = [0] * n
        for i, p in enumerate(self.coeffs):
            if i:
                power = _mul_trunc(power, base, n)
            for j, a in enumerate(p.coeffs):
                if a:
                    for k in range(j, n):
                        if power[k - j]:
                            total[k] += a * power[k - j]
        return total[start:]

    def last_index(self, nterms: int) -> int:
        return nterms - 1

    def __eq__(self, other) -> bool:
        return isinstance(other, AlgebraicRelation) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(("alg", self.coeffs))


@dataclass(frozen=True)
class PolynomialFormula:
    poly: UniPoly

    def __call__(self, n):
        return self.poly(n)

    def __str__(self) -> str:
        from .grammar import format_formula
        return format_formula(self.poly)


def falling_rise(m: int, i: int) -> int:
    """(m+1)(m+2)...(m+i): the factor d^i/dt^i puts on the coefficient of t^(m+i)."""
    out = 1
    for s in range(1, i + 1):
        out *= m + s
    return out


def _mul_trunc(a: list, b: list, n: int) -> list:
    out = [0] * n
    for i, x in enumerate(a[:n]):
        if x:
            for j in range(n - i):
                y = b[j]
                if y:
                    out[i + j] += x * y
    return out


@dataclass
class GuessReport:
    """Outcome of one ansatz sweep."""

    kind: str
    status: str
    relation: object | None = None
    fit_terms: int = 0
    verify_terms: int = 0
    verification_depth: int = 0
    shape: tuple[int, int] | None = None
    bounds_reached: tuple[int, int] | None = None
    shapes_tried: int = 0
    kernel_dim: int = 0
    skipped: tuple[int, ...] = ()
    notes: list[str] = field(default_factory=list)
    degenerate: bool = False

    VERIFIED = "verified-conjecture"
    NO_FIT = "no-fit-within-bounds"

    @property
    def verified(self) -> bool:
        return self.status == self.VERIFIED
