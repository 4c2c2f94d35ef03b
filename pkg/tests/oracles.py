"""Reference implementations that share no code with the package.

Univariate polynomials are coefficient lists, lowest degree first, over
Fraction. Matrices are lists of lists of Fractions.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import permutations
from typing import List, Sequence

Coeffs = List[Fraction]


def trim(a: Sequence) -> Coeffs:
    a = [Fraction(c) for c in a]
    while a and a[-1] == 0:
        a.pop()
    return a


def deg(a: Sequence) -> int:
    return len(trim(a)) - 1


def rem(a: Sequence, b: Sequence) -> Coeffs:
    a, b = trim(a), trim(b)
    while len(a) >= len(b):
        q = a[-1] / b[-1]
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[shift + i] -= q * c
        a = trim(a)
    return a


def gcd_degree(a: Sequence, b: Sequence) -> int:
    a, b = trim(a), trim(b)
    while b:
        a, b = b, rem(a, b)
    return deg(a)


def resultant(a: Sequence, b: Sequence) -> Fraction:
    """Res(a, b) by the Euclidean recurrence

    Res(a, b) = (-1)^(deg a deg b) lc(b)^(deg a - deg r) Res(b, r),  r = a mod b.
    """
    a, b = trim(a), trim(b)
    if not a or not b:
        return Fraction(0)
    da, db = deg(a), deg(b)
    if db == 0:
        return b[0] ** da
    if da == 0:
        return a[0] ** db
    r = rem(a, b)
    if not r:
        return Fraction(0)
    sign = -1 if (da * db) % 2 else 1
    return sign * b[-1] ** (da - deg(r)) * resultant(b, r)


def leibniz_det(m: Sequence[Sequence]) -> Fraction:
    n = len(m)
    total = Fraction(0)
    for perm in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        t = Fraction(-1 if inv % 2 else 1)
        for i, j in enumerate(perm):
            t *= m[i][j]
            if t == 0:
                break
        total += t
    return total


def matvec(m, v):
    return [sum(Fraction(a) * b for a, b in zip(row, v)) for row in m]
