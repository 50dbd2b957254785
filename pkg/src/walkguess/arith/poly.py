"""Dense univariate and sparse catalytic polynomials over the rationals."""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping

VARIABLES = ("n", "t", "x", "y")
CATALYTIC = ("x", "y")


class ArityError(ValueError):
    pass


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"exact rational expected, got {type(c).__name__}")


class UniPoly:
    """Polynomial in one named variable, coefficients indexed by exponent."""

    __slots__ = ("var", "coeffs")

    def __init__(self, coeffs: Iterable = (), var: str = "n"):
        if var not in VARIABLES:
            raise ValueError(f"unknown variable {var!r}")
        cs = [_frac(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.var = var
        self.coeffs = tuple(cs)

    @classmethod
    def monomial(cls, k: int, c=1, var: str = "n") -> UniPoly:
        return cls([0] * k + [c], var)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def _check(self, other: UniPoly) -> None:
        if self.var != other.var:
            raise ValueError(f"variable mismatch: {self.var} vs {other.var}")

    def __add__(self, other: UniPoly) -> UniPoly:
        self._check(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return UniPoly(out, self.var)

    def __neg__(self) -> UniPoly:
        return UniPoly([-c for c in self.coeffs], self.var)

    def __sub__(self, other: UniPoly) -> UniPoly:
        return self + (-other)

    def __mul__(self, other) -> UniPoly:
        if not isinstance(other, UniPoly):
            c = _frac(other)
            return UniPoly([c * a for a in self.coeffs], self.var)
        self._check(other)
        if not self.coeffs or not other.coeffs:
            return UniPoly([], self.var)
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return UniPoly(out, self.var)

    __rmul__ = __mul__

    def __call__(self, value):
        acc = Fraction(0) if not isinstance(value, int) else 0
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    def derivative(self) -> UniPoly:
        return UniPoly([i * c for i, c in enumerate(self.coeffs)][1:], self.var)

    def __eq__(self, other) -> bool:
        return isinstance(other, UniPoly) and self.var == other.var and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.var, self.coeffs))

    def __repr__(self) -> str:
        return f"UniPoly({[str(c) for c in self.coeffs]}, var={self.var!r})"

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def int_coeffs(self) -> list[int]:
        if not self.is_integral():
            raise ValueError("polynomial has non-integer coefficients")
        return [c.numerator for c in self.coeffs]


def content(ints: Iterable[int]) -> int:
    g = 0
    for v in ints:
        g = gcd(g, v)
        if g == 1:
            break
    return g


class CatalyticPoly:
    """Sparse polynomial in 0, 1 or 2 catalytic variables (x, then y).

    Keys are exponent tuples of length ``arity``; zero coefficients are never
    stored and negative exponents are rejected.
    """

    __slots__ = ("arity", "terms")

    def __init__(self, terms: Mapping[tuple, object] | None = None, arity: int = 1):
        if arity not in (0, 1, 2):
            raise ArityError(f"arity must be 0, 1 or 2, got {arity}")
        clean: dict[tuple, Fraction] = {}
        for k, c in (terms or {}).items():
            k = tuple(k)
            if len(k) != arity:
                raise ArityError(f"exponent {k} does not have length {arity}")
            if any(e < 0 for e in k):
                raise ValueError(f"negative exponent {k}")
            c = _frac(c)
            if c:
                clean[k] = c
        self.arity = arity
        self.terms = clean

    @classmethod
    def _raw(cls, terms: dict, arity: int) -> CatalyticPoly:
        # trusted constructor: terms already clean
        p = cls.__new__(cls)
        p.arity = arity
        p.terms = terms
        return p

    @classmethod
    def constant(cls, c, arity: int = 1) -> CatalyticPoly:
        return cls({(0,) * arity: c}, arity)

    @classmethod
    def zero(cls, arity: int = 1) -> CatalyticPoly:
        return cls._raw({}, arity)

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: CatalyticPoly) -> None:
        if self.arity != other.arity:
            raise ArityError(f"arity mismatch: {self.arity} vs {other.arity}")

    def __add__(self, other: CatalyticPoly) -> CatalyticPoly:
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return CatalyticPoly._raw(out, self.arity)

    def __neg__(self) -> CatalyticPoly:
        return CatalyticPoly._raw({k: -c for k, c in self.terms.items()}, self.arity)

    def __sub__(self, other: CatalyticPoly) -> CatalyticPoly:
        return self + (-other)

    def __mul__(self, other) -> CatalyticPoly:
        if not isinstance(other, CatalyticPoly):
            c = _frac(other)
            if not c:
                return CatalyticPoly.zero(self.arity)
            return CatalyticPoly._raw({k: v * c for k, v in self.terms.items()}, self.arity)
        self._check(other)
        out: dict[tuple, Fraction] = {}
        for ka, a in self.terms.items():
            for kb, b in other.terms.items():
                k = tuple(i + j for i, j in zip(ka, kb))
                out[k] = out.get(k, 0) + a * b
        return CatalyticPoly._raw({k: v for k, v in out.items() if v}, self.arity)

    __rmul__ = __mul__

    def shift(self, exps: tuple) -> CatalyticPoly:
        """Multiply by the monomial with exponents ``exps`` (may be negative
        as long as every resulting exponent stays non-negative)."""
        out = {}
        for k, c in self.terms.items():
            nk = tuple(i + j for i, j in zip(k, exps))
            if any(e < 0 for e in nk):
                raise ValueError(f"shift by {exps} would create exponent {nk}")
            out[nk] = c
        return CatalyticPoly._raw(out, self.arity)

    def _axis(self, var: str) -> int:
        try:
            axis = CATALYTIC.index(var)
        except ValueError:
            raise ValueError(f"{var!r} is not a catalytic variable") from None
        if axis >= self.arity:
            raise ArityError(f"variable {var} not present at arity {self.arity}")
        return axis

    def coeff(self, var: str, k: int) -> CatalyticPoly:
        """Coefficient of ``var**k``, as a polynomial in the remaining variables."""
        if k < 0:
            raise ValueError("slice exponent must be non-negative")
        axis = self._axis(var)
        out = {}
        for key, c in self.terms.items():
            if key[axis] == k:
                out[key[:axis] + key[axis + 1:]] = c
        return CatalyticPoly._raw(out, self.arity - 1)

    def embed(self, var: str, k: int, arity: int) -> CatalyticPoly:
        """Inverse of :meth:`coeff`: multiply by ``var**k`` in a ring of one
        more variable."""
        axis = CATALYTIC.index(var)
        if arity != self.arity + 1 or axis >= arity:
            raise ArityError("bad embedding")
        out = {key[:axis] + (k,) + key[axis:]: c for key, c in self.terms.items()}
        return CatalyticPoly._raw(out, arity)

    def low_slices(self, var: str, k: int) -> CatalyticPoly:
        """``sum_{i<k} var^i * coeff(var, i)``: the part of degree below ``k``
        in ``var``, arity unchanged."""
        axis = self._axis(var)
        return CatalyticPoly._raw({key: c for key, c in self.terms.items() if key[axis] < k}, self.arity)

    def substitute(self, var: str, value) -> CatalyticPoly:
        axis = self._axis(var)
        value = _frac(value)
        out: dict[tuple, Fraction] = {}
        for key, c in self.terms.items():
            e = key[axis]
            nk = key[:axis] + key[axis + 1:]
            out[nk] = out.get(nk, 0) + c * value**e
        return CatalyticPoly._raw({k: v for k, v in out.items() if v}, self.arity - 1)

    def value(self) -> Fraction:
        """The coefficient of an arity-0 polynomial."""
        if self.arity != 0:
            raise ArityError("value() needs arity 0")
        return self.terms.get((), Fraction(0))

    def total(self) -> Fraction:
        return sum(self.terms.values(), Fraction(0))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CatalyticPoly)
            and self.arity == other.arity
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        return hash((self.arity, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        items = ", ".join(f"{k}: {v}" for k, v in sorted(self.terms.items()))
        return f"CatalyticPoly({{{items}}}, arity={self.arity})"


def poly_arith(a: CatalyticPoly, b: CatalyticPoly, op: str) -> CatalyticPoly:
    if a.arity != b.arity:
        raise ArityError(f"arity mismatch: {a.arity} vs {b.arity}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")
