"""Truncated power series in t with catalytic-polynomial coefficients."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .poly import ArityError, CatalyticPoly


class TruncationError(IndexError):
    """Raised when a coefficient beyond the valid order is requested."""


class TruncatedSeries:
    """``c[0] + c[1] t + ... + c[N] t^N + O(t^(N+1))``.

    ``order`` is the index of the last valid coefficient.  Reading past it
    raises :class:`TruncationError` instead of returning zero.
    """

    __slots__ = ("coeffs", "exact", "arity")

    def __init__(self, coeffs: Sequence[CatalyticPoly], exact: bool = True, arity: int | None = None):
        coeffs = tuple(coeffs)
        if not coeffs:
            raise ValueError("a truncated series needs at least one coefficient")
        ar = coeffs[0].arity if arity is None else arity
        for c in coeffs:
            if c.arity != ar:
                raise ArityError("coefficients must share one arity")
        self.coeffs = coeffs
        self.exact = exact
        self.arity = ar

    @classmethod
    def from_terms(cls, terms: Iterable, arity: int = 0) -> TruncatedSeries:
        """Scalar series from a list of rationals."""
        if arity != 0:
            raise ArityError("from_terms builds scalar series only")
        return cls([CatalyticPoly.constant(c, 0) for c in terms], arity=0)

    @classmethod
    def one(cls, order: int, arity: int = 1) -> TruncatedSeries:
        z = CatalyticPoly.zero(arity)
        return cls([CatalyticPoly.constant(1, arity)] + [z] * order, arity=arity)

    @classmethod
    def zero(cls, order: int, arity: int = 1) -> TruncatedSeries:
        return cls([CatalyticPoly.zero(arity)] * (order + 1), arity=arity)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def coeff(self, n: int) -> CatalyticPoly:
        if n < 0:
            raise IndexError(n)
        if n > self.order:
            raise TruncationError(f"coefficient t^{n} requested from series valid to order {self.order}")
        return self.coeffs[n]

    def terms(self) -> list[Fraction]:
        """Scalar coefficients of an arity-0 series."""
        if self.arity != 0:
            raise ArityError("terms() needs a scalar series")
        return [c.value() for c in self.coeffs]

    def truncate(self, order: int) -> TruncatedSeries:
        if order > self.order:
            raise TruncationError(f"cannot extend series of order {self.order} to {order}")
        return TruncatedSeries(self.coeffs[: order + 1], self.exact, self.arity)

    def _check(self, other: TruncatedSeries) -> None:
        if self.arity != other.arity:
            raise ArityError(f"arity mismatch: {self.arity} vs {other.arity}")

    def __add__(self, other: TruncatedSeries) -> TruncatedSeries:
        self._check(other)
        n = min(self.order, other.order)
        return TruncatedSeries(
            [self.coeffs[i] + other.coeffs[i] for i in range(n + 1)],
            self.exact and other.exact, self.arity,
        )

    def __neg__(self) -> TruncatedSeries:
        return TruncatedSeries([-c for c in self.coeffs], self.exact, self.arity)

    def __sub__(self, other: TruncatedSeries) -> TruncatedSeries:
        return self + (-other)

    def __mul__(self, other) -> TruncatedSeries:
        if isinstance(other, TruncatedSeries):
            return series_mul(self, other)
        return TruncatedSeries([c * other for c in self.coeffs], self.exact, self.arity)

    __rmul__ = __mul__

    def mul_poly(self, p: CatalyticPoly) -> TruncatedSeries:
        return TruncatedSeries([c * p for c in self.coeffs], self.exact, self.arity)

    def shift_t(self, k: int) -> TruncatedSeries:
        """Multiply by ``t**k``; the result is valid ``k`` orders further."""
        if k < 0:
            raise ValueError("negative t-shift")
        z = CatalyticPoly.zero(self.arity)
        return TruncatedSeries([z] * k + list(self.coeffs), self.exact, self.arity)

    def shift_catalytic(self, exps: tuple) -> TruncatedSeries:
        return TruncatedSeries([c.shift(exps) for c in self.coeffs], self.exact, self.arity)

    def derivative(self) -> TruncatedSeries:
        """d/dt; loses one order of validity."""
        if self.order == 0:
            raise TruncationError("derivative of an order-0 truncation is undefined")
        return TruncatedSeries(
            [self.coeffs[i] * i for i in range(1, self.order + 1)], self.exact, self.arity
        )

    def valuation(self) -> int | None:
        for i, c in enumerate(self.coeffs):
            if not c.is_zero():
                return i
        return None

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TruncatedSeries)
            and self.arity == other.arity
            and self.coeffs == other.coeffs
        )

    def __repr__(self) -> str:
        return f"TruncatedSeries(order={self.order}, arity={self.arity})"


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product truncated at ``min(a.order, b.order)``."""
    a._check(b)
    n = min(a.order, b.order)
    out = []
    ac, bc = a.coeffs, b.coeffs
    for k in range(n + 1):
        acc = CatalyticPoly.zero(a.arity)
        for i in range(k + 1):
            if ac[i].terms and bc[k - i].terms:
                acc = acc + ac[i] * bc[k - i]
        out.append(acc)
    return TruncatedSeries(out, a.exact and b.exact, a.arity)


def coeff_slice(s: TruncatedSeries, var: str, k: int) -> TruncatedSeries:
    """Coefficient of ``var**k`` in every t-coefficient; arity drops by one."""
    if k < 0:
        raise ValueError("slice exponent must be non-negative")
    return TruncatedSeries([c.coeff(var, k) for c in s.coeffs], s.exact, s.arity - 1)


def substitute(s: TruncatedSeries, var: str, value) -> TruncatedSeries:
    return TruncatedSeries([c.substitute(var, value) for c in s.coeffs], s.exact, s.arity - 1)
