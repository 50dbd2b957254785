"""Exact matrices and right-kernel computation.

The default path is fraction-free Gauss-Jordan elimination on an integer
matrix (rows are cleared of denominators first).  Large systems go through
:mod:`walkguess.arith.modular` instead and are verified exactly afterwards.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

from .poly import content


class ExactMatrix:
    __slots__ = ("rows", "cols", "data")

    def __init__(self, data: Sequence[Sequence]):
        data = [[x if isinstance(x, Fraction) else Fraction(x) for x in row] for row in data]
        if not data or not data[0]:
            raise ValueError("matrix dimensions must be positive")
        w = len(data[0])
        if any(len(r) != w for r in data):
            raise ValueError("ragged matrix")
        self.rows = len(data)
        self.cols = w
        self.data = data

    def integer_rows(self) -> list[list[int]]:
        """Each row scaled by the lcm of its denominators."""
        out = []
        for row in self.data:
            m = lcm(*(x.denominator for x in row))
            out.append([(x * m).numerator for x in row])
        return out

    def apply(self, v: Sequence) -> list[Fraction]:
        if len(v) != self.cols:
            raise ValueError("dimension mismatch")
        return [sum((a * b for a, b in zip(row, v)), Fraction(0)) for row in self.data]

    def __repr__(self) -> str:
        return f"ExactMatrix({self.rows}x{self.cols})"


def canonical_vector(v: Sequence) -> tuple[int, ...]:
    """Clear denominators, divide by content, make the first nonzero entry positive."""
    fr = [x if isinstance(x, Fraction) else Fraction(x) for x in v]
    m = lcm(*(x.denominator for x in fr)) if fr else 1
    ints = [(x * m).numerator for x in fr]
    g = content(ints)
    if g == 0:
        return tuple(ints)
    ints = [x // g for x in ints]
    for x in ints:
        if x:
            if x < 0:
                ints = [-y for y in ints]
            break
    return tuple(ints)


def rref_fraction_free(rows: list[list[int]]) -> tuple[list[list[int]], list[int], int]:
    """Fraction-free Gauss-Jordan elimination (Bareiss style).

    Returns ``(M, pivots, d)`` where ``M / d`` is the reduced row echelon form
    restricted to the first ``len(pivots)`` rows.  Every division is exact.
    """
    m = [list(r) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    pivots: list[int] = []
    prev = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = None
        for i in range(r, nrows):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
        prow = m[r]
        p = prow[c]
        for i in range(nrows):
            if i == r:
                continue
            row = m[i]
            a = row[c]
            if a:
                m[i] = [(p * x - a * y) // prev for x, y in zip(row, prow)]
            elif p != prev:
                m[i] = [(p * x) // prev for x in row]
        prev = p
        pivots.append(c)
        r += 1
    return m[: len(pivots)], pivots, prev


def kernel_from_rref(m: list[list[int]], pivots: list[int], d: int, ncols: int) -> list[tuple[int, ...]]:
    basis = []
    pivset = set(pivots)
    for f in range(ncols):
        if f in pivset:
            continue
        v = [0] * ncols
        v[f] = d
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][f]
        basis.append(canonical_vector(v))
    return basis


def nullspace(mat: ExactMatrix) -> list[tuple[int, ...]]:
    """Exact basis of the right kernel, one canonical integer vector per
    non-pivot column (the reduced-echelon basis)."""
    rows = mat.integer_rows()
    m, pivots, d = rref_fraction_free(rows)
    return kernel_from_rref(m, pivots, d, mat.cols)


def rank(mat: ExactMatrix) -> int:
    return len(rref_fraction_free(mat.integer_rows())[1])
