"""Ansatz fitting by exact kernel computation, with held-out verification.

Every guesser follows the same protocol:

1. split the terms: the first ``ceil(fit_fraction * len)`` are used to build
   the linear system, everything after is held out;
2. sweep shapes ``(order, degree)`` by increasing unknown count, ties going
   to the lower order;
3. at each shape, test for a kernel modulo a word-size prime (a full rank
   there proves the rational kernel is trivial), then compute the exact
   kernel and keep the first basis vector whose relation annihilates every
   held-out equation.

Kernel existence at a fixed order is monotone in the degree, so by default
the sweep first finds, per order, the smallest degree with a modular kernel
and skips shapes below it.  The outcome is the same as testing every shape
(``strategy="naive"``), only cheaper.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

import numpy as np

from ..arith.linalg import kernel_from_rref, rref_fraction_free
from ..arith.modular import PRIME_CEILING, kernel_dim_mod_p, modular_nullspace
from ..arith.poly import UniPoly
from .relations import (
    AlgebraicRelation,
    DifferentialRelation,
    GuessReport,
    PolynomialFormula,
    Recurrence,
    TrivialRelation,
    falling_rise,
)

log = logging.getLogger(__name__)

RESOURCE_EXCEEDED = "resource-exceeded"


class InsufficientTerms(ValueError):
    pass


@dataclass(frozen=True)
class GuessConfig:
    fit_fraction: float = 0.6
    min_verify: int = 10
    margin: int = 2
    modular_unknowns: int = 500
    modular_bits: int = 50_000
    time_limit: float | None = None
    strategy: str = "monotone"


DEFAULT_CONFIG = GuessConfig()


def exact_terms(terms: Sequence) -> list[Fraction]:
    out = []
    for i, v in enumerate(terms):
        if isinstance(v, bool) or isinstance(v, float):
            raise TypeError(f"term {i} is not exact: {v!r}")
        if isinstance(v, (int, Fraction)):
            out.append(Fraction(v))
        elif isinstance(v, str):
            out.append(Fraction(v.strip()))
        else:
            raise TypeError(f"term {i} is not an exact rational: {v!r}")
    return out


def _integer_scaled(terms: Sequence[Fraction]) -> list[int]:
    den = lcm(*(t.denominator for t in terms)) if terms else 1
    return [(t * den).numerator for t in terms]


def _integer_rows(rows: list[list]) -> list[list[int]]:
    out = []
    for row in rows:
        if all(isinstance(x, int) for x in row):
            out.append(row)
        else:
            den = lcm(*(Fraction(x).denominator for x in row))
            out.append([(Fraction(x) * den).numerator for x in row])
    return out


class _Ansatz:
    kind = ""
    min_order = 1

    def __init__(self, terms: Sequence[Fraction], p: int = PRIME_CEILING):
        self.terms = list(terms)
        self.p = p
        self.M = len(terms)

    def rows_available(self, order: int, nterms: int) -> int:
        raise NotImplementedError

    def exact_rows(self, order: int, degree: int, lo: int, hi: int) -> list[list]:
        raise NotImplementedError

    def mod_rows(self, order: int, degree: int, lo: int, hi: int) -> np.ndarray:
        raise NotImplementedError

    def relation(self, vec: Sequence[int], order: int, degree: int, terms: Sequence):
        raise NotImplementedError

    def residuals(self, rel, lo: int, hi: int) -> list:
        return [rel.residual(self.terms, k) for k in range(lo, hi)]

    def _polys(self, vec, order, degree, var):
        w = degree + 1
        return tuple(UniPoly(vec[i * w:(i + 1) * w], var) for i in range(order + 1))


class _LinearAnsatz(_Ansatz):
    """Shared precomputation for recurrences and differential equations:
    integer-scaled terms (the relation is homogeneous, so scaling is free)."""

    def __init__(self, terms, p=PRIME_CEILING):
        super().__init__(terms, p)
        self.ints = _integer_scaled(self.terms)
        self.cm = np.array([x % p for x in self.ints], dtype=np.int64)
        self._kpow_mod: list[np.ndarray] = [np.ones(self.M, dtype=np.int64)]
        self._ar = np.arange(self.M, dtype=np.int64) % p

    def kpow_mod(self, j: int) -> np.ndarray:
        while len(self._kpow_mod) <= j:
            self._kpow_mod.append(self._kpow_mod[-1] * self._ar % self.p)
        return self._kpow_mod[j]


class RecurrenceAnsatz(_LinearAnsatz):
    kind = "rec"

    def rows_available(self, order, nterms):
        return max(nterms - order, 0)

    def exact_rows(self, order, degree, lo, hi):
        c = self.ints
        rows = []
        for k in range(lo, hi):
            kp = [k**j for j in range(degree + 1)]
            rows.append([kp[j] * c[k + i] for i in range(order + 1) for j in range(degree + 1)])
        return rows

    def mod_rows(self, order, degree, lo, hi):
        p = self.p
        out = np.empty((hi - lo, (order + 1) * (degree + 1)), dtype=np.int64)
        col = 0
        for i in range(order + 1):
            ci = self.cm[lo + i:hi + i]
            for j in range(degree + 1):
                out[:, col] = self.kpow_mod(j)[lo:hi] * ci % p
                col += 1
        return out

    def relation(self, vec, order, degree, terms):
        polys = self._polys(vec, order, degree, "n")
        rel = Recurrence(polys)
        d = rel.order
        lead = rel.coeffs[-1]
        exc = tuple(n for n in range(0, len(terms) - d) if lead(n) == 0)
        return Recurrence(
            rel.coeffs,
            initial=tuple(terms[:d]),
            exceptional=exc,
            extra=tuple((n + d, terms[n + d]) for n in exc),
        )


class DifferentialAnsatz(_LinearAnsatz):
    kind = "ode"

    def __init__(self, terms, p=PRIME_CEILING):
        super().__init__(terms, p)
        self._rise_mod: dict[int, np.ndarray] = {}

    def rise_mod(self, i: int) -> np.ndarray:
        if i not in self._rise_mod:
            r = np.ones(self.M, dtype=np.int64)
            for s in range(1, i + 1):
                r = r * ((self._ar + s) % self.p) % self.p
            self._rise_mod[i] = r
        return self._rise_mod[i]

    def rows_available(self, order, nterms):
        return max(nterms - order, 0)

    def exact_rows(self, order, degree, lo, hi):
        c = self.ints
        rows = []
        for k in range(lo, hi):
            row = []
            for i in range(order + 1):
                for j in range(degree + 1):
                    m = k - j
                    row.append(falling_rise(m, i) * c[m + i] if m >= 0 else 0)
            rows.append(row)
        return rows

    def mod_rows(self, order, degree, lo, hi):
        p = self.p
        out = np.zeros((hi - lo, (order + 1) * (degree + 1)), dtype=np.int64)
        col = 0
        for i in range(order + 1):
            ri = self.rise_mod(i)
            for j in range(degree + 1):
                a = max(lo, j)
                if a < hi:
                    m0, m1 = a - j, hi - j
                    out[a - lo:, col] = ri[m0:m1] * self.cm[m0 + i:m1 + i] % p
                col += 1
        return out

    def relation(self, vec, order, degree, terms):
        return DifferentialRelation(self._polys(vec, order, degree, "t"))


class AlgebraicAnsatz(_Ansatz):
    kind = "alg"

    def __init__(self, terms, p=PRIME_CEILING):
        super().__init__(terms, p)
        self.integral = all(t.denominator == 1 for t in self.terms)
        base = [t.numerator for t in self.terms] if self.integral else self.terms
        self._base = base
        self._pow: list[list] = [[1] + [0] * (self.M - 1)]
        self._pow_mod: list[np.ndarray] = []

    def power(self, i: int) -> list:
        n = self.M
        while len(self._pow) <= i:
            prev = self._pow[-1]
            out = [0] * n
            b = self._base
            for a_i, x in enumerate(prev):
                if x:
                    for j in range(n - a_i):
                        y = b[j]
                        if y:
                            out[a_i + j] += x * y
            self._pow.append(out)
        return self._pow[i]

    def power_mod(self, i: int) -> np.ndarray:
        while len(self._pow_mod) <= i:
            k = len(self._pow_mod)
            pw = self.power(k)
            if self.integral:
                self._pow_mod.append(np.array([x % self.p for x in pw], dtype=np.int64))
            else:
                vals = []
                for x in pw:
                    x = Fraction(x)
                    vals.append(x.numerator % self.p * pow(x.denominator, -1, self.p) % self.p)
                self._pow_mod.append(np.array(vals, dtype=np.int64))
        return self._pow_mod[i]

    def rows_available(self, order, nterms):
        return nterms

    def exact_rows(self, order, degree, lo, hi):
        pw = [self.power(i) for i in range(order + 1)]
        return [
            [pw[i][k - j] if k >= j else 0 for i in range(order + 1) for j in range(degree + 1)]
            for k in range(lo, hi)
        ]

    def mod_rows(self, order, degree, lo, hi):
        out = np.zeros((hi - lo, (order + 1) * (degree + 1)), dtype=np.int64)
        col = 0
        for i in range(order + 1):
            pm = self.power_mod(i)
            for j in range(degree + 1):
                a = max(lo, j)
                if a < hi:
                    out[a - lo:, col] = pm[a - j:hi - j]
                col += 1
        return out

    def relation(self, vec, order, degree, terms):
        return AlgebraicRelation(self._polys(vec, order, degree, "t"))

    def residuals(self, rel, lo, hi):
        if hi <= lo:
            return []
        return rel.residuals(self.terms, lo, hi - 1)


ANSATZE = {"rec": RecurrenceAnsatz, "ode": DifferentialAnsatz, "alg": AlgebraicAnsatz}


def sweep_shapes(max_order: int, max_degree: int, min_order: int = 1) -> list[tuple[int, int]]:
    """All shapes in sweep order: by unknown count, then order, then degree."""
    shapes = [(r, d) for r in range(min_order, max_order + 1) for d in range(max_degree + 1)]
    shapes.sort(key=lambda s: ((s[0] + 1) * (s[1] + 1), s[0], s[1]))
    return shapes


def _support_key(v: Sequence[int]) -> tuple[int, ...]:
    return tuple(i for i, x in enumerate(v) if x)


class _Sweep:
    def __init__(self, ansatz: _Ansatz, max_order: int, max_degree: int, config: GuessConfig):
        self.a = ansatz
        self.cfg = config
        self.max_order = max_order
        self.max_degree = max_degree
        self.M = ansatz.M
        self.F = min(self.M, math.ceil(config.fit_fraction * self.M))
        self._min_deg: dict[int, int | None] = {}
        self.tried = 0
        self.bounds: tuple[int, int] | None = None

    def fit_rows(self, order: int) -> int:
        return self.a.rows_available(order, self.F)

    def all_rows(self, order: int) -> int:
        return self.a.rows_available(order, self.M)

    def feasible(self, order: int, degree: int) -> bool:
        unknowns = (order + 1) * (degree + 1)
        return (
            unknowns <= self.fit_rows(order) - self.cfg.margin
            and self.all_rows(order) - self.fit_rows(order) >= self.cfg.min_verify
        )

    def has_mod_kernel(self, order: int, degree: int) -> bool:
        a = self.a.mod_rows(order, degree, 0, self.fit_rows(order))
        return kernel_dim_mod_p(a, self.a.p) > 0

    def min_degree(self, order: int) -> int | None:
        """Smallest feasible degree with a modular kernel at this order."""
        if order in self._min_deg:
            return self._min_deg[order]
        hi = -1
        for d in range(self.max_degree, -1, -1):
            if self.feasible(order, d):
                hi = d
                break
        result = None
        if hi >= 0 and self.has_mod_kernel(order, hi):
            lo = 0
            while lo < hi:
                mid = (lo + hi) // 2
                if self.has_mod_kernel(order, mid):
                    hi = mid
                else:
                    lo = mid + 1
            result = hi
        self._min_deg[order] = result
        return result

    def exact_kernel(self, order: int, degree: int) -> list[tuple[int, ...]]:
        rows = _integer_rows(self.a.exact_rows(order, degree, 0, self.fit_rows(order)))
        ncols = (order + 1) * (degree + 1)
        bits = max((abs(x).bit_length() for row in rows for x in row), default=0)
        if ncols > self.cfg.modular_unknowns or ncols * bits > self.cfg.modular_bits:
            log.info("shape (%d, %d): modular kernel, %d unknowns, %d-bit entries", order, degree, ncols, bits)
            return modular_nullspace(rows)
        m, piv, dd = rref_fraction_free(rows)
        return kernel_from_rref(m, piv, dd, ncols)

    def try_shape(self, order: int, degree: int):
        self.tried += 1
        self.bounds = (order, degree)
        if self.cfg.strategy == "monotone":
            md = self.min_degree(order)
            if md is None or degree < md:
                return None
        # "naive": exact kernel at every shape, the reference the monotone
        # search must agree with
        basis = self.exact_kernel(order, degree)
        if not basis:
            return None
        lo, hi = self.fit_rows(order), self.all_rows(order)
        for vec in sorted(basis, key=_support_key):
            try:
                rel = self.a.relation(vec, order, degree, self.a.terms)
            except TrivialRelation:
                continue
            if all(r == 0 for r in self.a.residuals(rel, lo, hi)):
                return rel, len(basis)
        return None


def _fit(kind: str, terms, max_order: int, max_degree: int, config: GuessConfig | None) -> GuessReport:
    cfg = config or DEFAULT_CONFIG
    terms = exact_terms(terms)
    ansatz = ANSATZE[kind](terms)
    sw = _Sweep(ansatz, max_order, max_degree, cfg)
    if all(t == 0 for t in terms):
        return GuessReport(kind=kind, status=GuessReport.NO_FIT, notes=["all terms are zero"], degenerate=True)
    shapes = [s for s in sweep_shapes(max_order, max_degree) if sw.feasible(*s)]
    if not shapes:
        need_small = _terms_needed(kind, 1, 0, cfg)
        need_full = _terms_needed(kind, max_order, max_degree, cfg)
        raise InsufficientTerms(
            f"{len(terms)} terms cannot support any {kind} shape: the smallest needs "
            f"{need_small} terms and order {max_order}, degree {max_degree} needs {need_full}"
        )
    report = GuessReport(kind=kind, status=GuessReport.NO_FIT, fit_terms=sw.F, verify_terms=len(terms) - sw.F)
    start = time.monotonic()
    for order, degree in shapes:
        if cfg.time_limit is not None and time.monotonic() - start > cfg.time_limit:
            report.status = RESOURCE_EXCEEDED
            report.notes.append(f"time limit {cfg.time_limit}s reached before shape ({order}, {degree})")
            break
        found = sw.try_shape(order, degree)
        if found is None:
            continue
        rel, kdim = found
        report.status = GuessReport.VERIFIED
        report.relation = rel
        report.shape = (order, degree)
        report.kernel_dim = kdim
        if kdim > 1:
            report.notes.append(f"kernel dimension {kdim} at the first successful shape")
        fit_rows = sw.fit_rows(order)
        report.verification_depth = verify_relation(rel, terms, fit_rows)
        if isinstance(rel, Recurrence):
            report.skipped = tuple(n for n in rel.exceptional if n >= fit_rows)
        break
    report.shapes_tried = sw.tried
    report.bounds_reached = sw.bounds
    return report


def _terms_needed(kind: str, order: int, degree: int, cfg: GuessConfig) -> int:
    unknowns = (order + 1) * (degree + 1)
    lost = 0 if kind == "alg" else order
    m = lost + 1
    while True:
        f = math.ceil(cfg.fit_fraction * m)
        if f - lost - cfg.margin >= unknowns and m - f >= cfg.min_verify:
            return m
        m += 1


def guess_recurrence(terms, max_order: int = 12, max_degree: int = 12, config: GuessConfig | None = None) -> GuessReport:
    return _fit("rec", terms, max_order, max_degree, config)


def guess_ode(terms, max_order: int = 12, max_degree: int = 12, config: GuessConfig | None = None) -> GuessReport:
    return _fit("ode", terms, max_order, max_degree, config)


def guess_algebraic(terms, max_deg_C: int = 12, max_deg_t: int = 12, config: GuessConfig | None = None) -> GuessReport:
    return _fit("alg", terms, max_deg_C, max_deg_t, config)


def guess_polynomial(terms) -> GuessReport:
    """Interpolate the first half of the terms (indexed from n = 0) with the
    lowest-degree polynomial and accept it only if it reproduces the rest."""
    terms = exact_terms(terms)
    if len(terms) < 4:
        raise InsufficientTerms(f"polynomial guessing needs at least 4 terms, got {len(terms)}")
    fit = math.ceil(len(terms) / 2)
    poly = _newton_interpolate(terms[:fit])
    report = GuessReport(kind="poly", status=GuessReport.NO_FIT, fit_terms=fit,
                         verify_terms=len(terms) - fit, shapes_tried=1, bounds_reached=(0, fit - 1))
    formula = PolynomialFormula(poly)
    depth = 0
    for n in range(fit, len(terms)):
        if formula(n) != terms[n]:
            break
        depth += 1
    if depth == len(terms) - fit:
        report.status = GuessReport.VERIFIED
        report.relation = formula
        report.shape = (0, max(poly.degree, 0))
        report.verification_depth = depth
    return report


def _newton_interpolate(values: Sequence[Fraction]) -> UniPoly:
    """Interpolating polynomial through (n, values[n]), n = 0..len-1, of
    minimal degree (trailing zero divided differences are dropped)."""
    n = len(values)
    table = list(values)
    diffs = [table[0]]
    for level in range(1, n):
        table = [(table[i + 1] - table[i]) / level for i in range(len(table) - 1)]
        diffs.append(table[0])
    poly = UniPoly([], "n")
    basis = UniPoly([1], "n")
    for k, c in enumerate(diffs):
        if c:
            poly = poly + basis * c
        basis = basis * UniPoly([-k, 1], "n")
    return poly


def compress_zeros(terms) -> tuple[list[Fraction], int, int]:
    """Largest period ``g`` and residue ``r`` with every nonzero term at an
    index congruent to ``r`` mod ``g``; returns ``(terms[r::g], g, r)``.

    An all-zero input comes back unchanged with period 1.
    """
    terms = exact_terms(terms)
    support = [i for i, v in enumerate(terms) if v]
    if not support:
        return terms, 1, 0
    g = 0
    for i in support[1:]:
        g = math.gcd(g, i - support[0])
    if g <= 1:
        return terms, 1, 0
    r = support[0] % g
    return terms[r::g], g, r


def verify_relation(relation, terms, from_index: int = 0) -> int:
    return verification_details(relation, terms, from_index).depth


@dataclass
class Verification:
    depth: int
    checked: int
    first_failure: int | None
    skipped: tuple[int, ...]
    last_index: int

    @property
    def full(self) -> bool:
        return self.first_failure is None


def verification_details(relation, terms, from_index: int = 0) -> Verification:
    """Count consecutive indices from ``from_index`` where the relation
    holds exactly.  Recurrence indices with a vanishing leading coefficient
    are skipped (and listed) rather than counted."""
    terms = exact_terms(terms)
    if isinstance(relation, PolynomialFormula):
        last = len(terms) - 1
        depth = 0
        fail = None
        for n in range(from_index, last + 1):
            if relation(n) != terms[n]:
                fail = n
                break
            depth += 1
        return Verification(depth, depth, fail, (), last)
    last = relation.last_index(len(terms))
    if isinstance(relation, AlgebraicRelation):
        values = relation.residuals(terms, from_index, last) if last >= from_index else []
        residual = dict(zip(range(from_index, last + 1), values))
    else:
        residual = None
    lead = relation.coeffs[-1]
    depth = 0
    skipped = []
    fail = None
    for k in range(from_index, last + 1):
        if isinstance(relation, Recurrence) and lead(k) == 0:
            skipped.append(k)
            continue
        r = residual[k] if residual is not None else relation.residual(terms, k)
        if r != 0:
            fail = k
            break
        depth += 1
    return Verification(depth, depth + len(skipped), fail, tuple(skipped), last)
