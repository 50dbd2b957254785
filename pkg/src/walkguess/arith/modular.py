"""Modular kernel computation: elimination mod word-size primes, Chinese
remaindering, rational reconstruction, exact verification.

Used for systems too large for fraction-free elimination.  A full column
rank modulo one prime already proves the rational kernel is trivial, which
makes :func:`kernel_dim_mod_p` a sound (and cheap) negative filter.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from functools import lru_cache
from math import isqrt
from typing import Sequence

import numpy as np

from .linalg import canonical_vector

log = logging.getLogger(__name__)

PRIME_CEILING = 2**31 - 1


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for f in range(3, isqrt(n) + 1, 2):
        if n % f == 0:
            return False
    return True


@lru_cache(maxsize=None)
def primes(count: int) -> tuple[int, ...]:
    """The ``count`` largest primes below 2**31 (descending)."""
    out = []
    n = PRIME_CEILING
    while len(out) < count:
        if _is_prime(n):
            out.append(n)
        n -= 2
    return tuple(out)


def reduce_rows(rows: Sequence[Sequence[int]], p: int) -> np.ndarray:
    return np.array([[x % p for x in row] for row in rows], dtype=np.int64)


def rref_mod_p(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over GF(p); ``p`` must be below 2**31."""
    a = a.copy() % p
    nrows, ncols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r, c:] = (a[r, c:] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            a[hit, c:] = (a[hit, c:] - col[hit, None] * a[r, c:][None, :]) % p
        pivots.append(c)
        r += 1
    return a[: len(pivots)], pivots


def kernel_dim_mod_p(rows: Sequence[Sequence[int]] | np.ndarray, p: int = PRIME_CEILING) -> int:
    a = rows if isinstance(rows, np.ndarray) else reduce_rows(rows, p)
    return a.shape[1] - len(rref_mod_p(a, p)[1])


def _kernel_residues(r: np.ndarray, pivots: list[int], ncols: int, p: int) -> list[list[int]]:
    """Reduced-echelon kernel basis mod p: one vector per free column, with a
    1 in that column."""
    out = []
    pivset = set(pivots)
    for f in range(ncols):
        if f in pivset:
            continue
        v = [0] * ncols
        v[f] = 1
        for i, pc in enumerate(pivots):
            v[pc] = int(-r[i, f]) % p
        out.append(v)
    return out


def crt_pair(a1: int, m1: int, a2: int, m2: int) -> tuple[int, int]:
    t = ((a2 - a1) * pow(m1, -1, m2)) % m2
    return a1 + m1 * t, m1 * m2


def rational_reconstruction(a: int, m: int) -> Fraction | None:
    """Find n/d with n = a*d (mod m), |n|, d <= sqrt(m/2); None if absent."""
    a %= m
    bound = isqrt(m // 2)
    r0, r1 = m, a
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    return Fraction(r1, s1)


def _verify(rows: Sequence[Sequence[int]], v: Sequence[int]) -> bool:
    nz = [(j, x) for j, x in enumerate(v) if x]
    for row in rows:
        if sum(row[j] * x for j, x in nz):
            return False
    return True


class ReconstructionFailed(RuntimeError):
    pass


def modular_nullspace(rows: Sequence[Sequence[int]], max_primes: int = 400) -> list[tuple[int, ...]]:
    """Right kernel of an integer matrix via CRT + rational reconstruction.

    The result is the same reduced-echelon basis :func:`linalg.nullspace`
    produces, in canonical integer form, and is verified exactly against
    ``rows`` before it is returned.
    """
    ncols = len(rows[0])
    acc: list[list[int]] | None = None
    modulus = 1
    best_pivots: list[int] | None = None
    last: list[tuple[int, ...]] | None = None
    for p in primes(max_primes):
        r, pivots = rref_mod_p(reduce_rows(rows, p), p)
        if best_pivots is not None and pivots != best_pivots:
            if len(pivots) < len(best_pivots) or (len(pivots) == len(best_pivots) and pivots > best_pivots):
                log.debug("discarding unlucky prime %d", p)
                continue
            acc, modulus = None, 1
        best_pivots = pivots
        res = _kernel_residues(r, pivots, ncols, p)
        if not res:
            return []
        if acc is None:
            acc, modulus = res, p
        else:
            new_mod = modulus * p
            acc = [[crt_pair(a, modulus, b, p)[0] % new_mod for a, b in zip(va, vb)] for va, vb in zip(acc, res)]
            modulus = new_mod
        basis = []
        for vec in acc:
            fr = []
            for x in vec:
                q = rational_reconstruction(x, modulus)
                if q is None:
                    break
                fr.append(q)
            else:
                basis.append(canonical_vector(fr))
                continue
            break
        if len(basis) != len(acc):
            last = None
            continue
        if basis == last and all(_verify(rows, v) for v in basis):
            return basis
        last = basis
    raise ReconstructionFailed(f"kernel did not stabilise within {max_primes} primes")
