"""Producers of sequence terms: recurrence unrolling in a constant window,
and the independent Catalan oracles used to cross-check guesses."""

from __future__ import annotations

from collections import deque
from fractions import Fraction

from .guess.relations import PolynomialFormula, Recurrence


class ExceptionalIndex(ValueError):
    """The leading coefficient vanishes and no value was supplied."""


class SequenceStream:
    """Pull-based stream of sequence terms.

    For a recurrence of order d only the last d values are retained;
    :attr:`state_size` exposes that so the memory contract can be tested.
    """

    def __init__(self, source):
        self.source = source
        self.restart()

    def restart(self) -> None:
        self.index = 0
        if isinstance(self.source, Recurrence):
            self._window = deque(maxlen=max(self.source.order, 1))
            self._extra = dict(self.source.extra)
            self._int_coeffs = [[int(c) for c in p.coeffs] for p in self.source.coeffs]
        else:
            self._window = deque(maxlen=1)

    @property
    def state_size(self) -> int:
        return len(self._window)

    def __iter__(self):
        return self

    def __next__(self):
        n = self.index
        src = self.source
        if isinstance(src, PolynomialFormula):
            value = src(n)
        elif callable(src):
            value = src(n)
        else:
            value = self._next_rec(n)
        self._window.append(value)
        self.index += 1
        return value

    def _next_rec(self, n: int):
        rec = self.source
        d = rec.order
        if n < d:
            if n >= len(rec.initial):
                raise ExceptionalIndex(f"initial value c({n}) missing")
            return rec.initial[n]
        if n in self._extra:
            return self._extra[n]
        m = n - d
        if m < rec.offset:
            raise ExceptionalIndex(f"c({n}) lies before the recurrence's offset {rec.offset}")
        lead = _eval(self._int_coeffs[d], m)
        if lead == 0:
            raise ExceptionalIndex(f"leading coefficient vanishes at n={m}; c({n}) must be supplied")
        window = self._window
        acc = 0
        for i in range(d):
            q = _eval(self._int_coeffs[i], m)
            if q:
                acc += q * window[i]
        return Fraction(-acc) / lead


def _eval(cs: list[int], n: int) -> int:
    acc = 0
    for c in reversed(cs):
        acc = acc * n + c
    return acc


def unroll(rec: Recurrence, N: int) -> list[Fraction]:
    """Terms c(0..N) of a P-recursive sequence, keeping only ``order`` values."""
    stream = SequenceStream(rec)
    return [next(stream) for _ in range(N + 1)]


def convolution_oracle(N: int) -> list[int]:
    """Catalan numbers from ``a(n) = sum_{i<n} a(i) a(n-1-i)``, quadratic time,
    full history."""
    a = [1]
    for n in range(1, N + 1):
        a.append(sum(a[i] * a[n - 1 - i] for i in range(n)))
    return a


def factorial(n: int) -> int:
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def closed_form_catalan(n: int) -> int:
    if n < 0:
        raise ValueError("n must be non-negative")
    return factorial(2 * n) // (factorial(n) * factorial(n + 1))


def binomial_coefficient(n: int, k: int) -> int:
    if not 0 <= k <= n:
        raise ValueError(f"binomial({n}, {k}) is out of range")
    return factorial(n) // (factorial(k) * factorial(n - k))


def _power_coeffs(base: list, d: int, n: int) -> list[list]:
    pw = [[1] + [0] * (n - 1)]
    for _ in range(d):
        prev = pw[-1]
        out = [0] * n
        for i, x in enumerate(prev):
            if x:
                for j in range(n - i):
                    if base[j]:
                        out[i + j] += x * base[j]
        pw.append(out)
    return pw


def _apply(polys, pw, k: int):
    """Coefficient of t^k in sum_i polys[i](t) * series_i(t)."""
    acc = 0
    for p, s in zip(polys, pw):
        for j, a in enumerate(p.coeffs):
            if a and k - j >= 0:
                acc += a * s[k - j]
    return acc


def expand_algebraic(rel, initial, N: int) -> list[Fraction]:
    """Series root of ``sum p_i(t) C^i = 0`` through t^N, continuing the
    given initial coefficients one at a time.

    With ``v`` the valuation of dP/dC at the root, the coefficient of
    t^(k+v) in P(t, C) is linear in c_k once k > v, which fixes c_k.
    """
    c = [Fraction(x) for x in initial]
    dpolys = [p * i for i, p in enumerate(rel.coeffs)][1:]
    n0 = len(c)
    pw = _power_coeffs(c, rel.order - 1, n0)
    v = next((k for k in range(n0) if _apply(dpolys, pw, k) != 0), None)
    if v is None or v >= n0:
        raise ValueError("not enough initial terms to pin the branch")
    lead = _apply(dpolys, pw, v)
    while len(c) <= N:
        k = len(c)
        trial = c + [Fraction(0)] * (v + 1)
        pw = _power_coeffs(trial, rel.order, k + v + 1)
        c.append(-Fraction(_apply(rel.coeffs, pw, k + v)) / lead)
    return c[: N + 1]
