"""Exact sums of roots of unity.

A sum ``sum_j c_j exp(2 pi i j / M)`` with integer ``c_j`` is an element of
the cyclotomic ring Z[zeta_M]. It is zero iff the polynomial
``sum_j c_j x**j`` vanishes modulo the cyclotomic polynomial Phi_M.

Phi_M(x) = Phi_r(x**s) with ``r = rad(M)`` and ``s = M / r``, so writing
``j = a + b s`` splits the reduction into ``s`` independent reductions of
degree-``r`` polynomials modulo Phi_r. Each is a small integer matrix
product.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np


def radical(m: int) -> int:
    r, p, n = 1, 2, m
    while p * p <= n:
        if n % p == 0:
            r *= p
            while n % p == 0:
                n //= p
        p += 1
    return r * n if n > 1 else r


@lru_cache(maxsize=None)
def cyclotomic_coeffs(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, lowest degree first."""
    from sympy import Poly, Symbol, cyclotomic_poly

    x = Symbol("x")
    return tuple(int(c) for c in reversed(Poly(cyclotomic_poly(n, x), x).all_coeffs()))


@lru_cache(maxsize=None)
def reduction_matrix(r: int) -> np.ndarray:
    """Integer matrix R with ``y**b mod Phi_r = sum_k R[b, k] y**k``."""
    phi = cyclotomic_coeffs(r)
    deg = len(phi) - 1
    rows = np.zeros((r, deg), dtype=np.int64)
    cur = np.zeros(deg, dtype=np.int64)
    cur[0] = 1
    for b in range(r):
        rows[b] = cur
        # multiply by y, then eliminate the y**deg term using the monic Phi_r
        top = cur[-1]
        cur = np.concatenate(([0], cur[:-1]))
        cur -= top * np.asarray(phi[:-1], dtype=np.int64)
    rows.setflags(write=False)
    return rows


def reduce_counts(counts: np.ndarray, m: int) -> np.ndarray:
    """Canonical coordinates of ``sum_j counts[..., j] zeta_m**j``.

    Returns an integer array of shape ``counts.shape[:-1] + (phi(r), s)``;
    two sums are equal iff their coordinates are equal.
    """
    counts = np.asarray(counts, dtype=np.int64)
    if counts.shape[-1] != m:
        raise ValueError(f"last axis must have length {m}")
    if np.abs(counts).max(initial=0) > 2**40:
        raise OverflowError("counts too large for int64 reduction")
    r = radical(m)
    s = m // r
    lead = counts.shape[:-1]
    blocks = counts.reshape(lead + (r, s))
    return np.einsum("...bs,bk->...ks", blocks, reduction_matrix(r))


def is_zero(counts: np.ndarray, m: int) -> np.ndarray:
    """Exact zero test along the last axis."""
    red = reduce_counts(counts, m)
    return ~np.any(red.reshape(red.shape[:-2] + (-1,)), axis=-1)


def antipodal_certificate(counts: np.ndarray) -> np.ndarray:
    """True where ``c_j == c_{j + M/2}`` for all j, which forces a zero sum.

    Sufficient, not necessary; it is the cheap first test.
    """
    counts = np.asarray(counts)
    m = counts.shape[-1]
    if m % 2:
        return np.zeros(counts.shape[:-1], dtype=bool)
    h = m // 2
    return np.all(counts[..., :h] == counts[..., h:], axis=-1)


def evaluate(counts: np.ndarray, m: int) -> np.ndarray:
    """Float value of the exact sum; one rounding per root of unity."""
    j = np.arange(m)
    zeta = np.exp(2j * np.pi * j / m)
    return np.asarray(counts, dtype=np.float64) @ zeta


def bin_phases(exponents: np.ndarray, m: int, weights=None, rows=None, n_rows: int = 1) -> np.ndarray:
    """Histogram integer exponents (mod m) into count vectors.

    ``rows`` assigns each exponent to one of ``n_rows`` output sums.
    """
    e = np.mod(np.asarray(exponents, dtype=np.int64), m).ravel()
    if rows is not None:
        e = e + m * np.asarray(rows, dtype=np.int64).ravel()
    w = None if weights is None else np.asarray(weights).ravel()
    out = np.bincount(e, weights=w, minlength=m * n_rows)
    if w is not None:
        out = np.rint(out).astype(np.int64)
    return out.reshape(n_rows, m) if rows is not None else out


def common_modulus(fracs) -> int:
    """Smallest M with ``exp(i pi q)`` an M-th root of unity for every q."""
    den = 1
    for q in fracs:
        den = math.lcm(den, Fraction(q).denominator)
    return 2 * den


def exponent_index(q: Fraction, m: int) -> int:
    """j with ``exp(i pi q) = zeta_m**j``."""
    v = Fraction(q) * m / 2
    if v.denominator != 1:
        raise ValueError(f"exp(i pi {q}) is not an {m}-th root of unity")
    return v.numerator % m


class PhaseSum:
    """Accumulator for an integer combination of M-th roots of unity."""

    def __init__(self, m: int):
        self.m = int(m)
        self.counts = np.zeros(self.m, dtype=np.int64)

    def add_exponents(self, idx, weight: int = 1):
        self.counts += weight * bin_phases(idx, self.m)
        return self

    def add_phase(self, q: Fraction, weight: int = 1):
        """Add ``weight * exp(i pi q)``."""
        self.counts[exponent_index(q, self.m)] += weight
        return self

    def __sub__(self, other: "PhaseSum") -> "PhaseSum":
        if other.m != self.m:
            raise ValueError("moduli differ")
        out = PhaseSum(self.m)
        out.counts = self.counts - other.counts
        return out

    def is_zero(self) -> bool:
        return bool(antipodal_certificate(self.counts) or is_zero(self.counts, self.m))

    def value(self) -> complex:
        return complex(evaluate(self.counts, self.m))
