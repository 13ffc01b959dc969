"""
Small exact linear algebra over Z and Q: row-style Hermite normal form,
rational row reduction, null spaces and particular solutions.

Matrices are lists of rows of Python ints (or Fractions); the sizes met
here are a few dozen columns at most.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Matrix = list[list[int]]


def hnf(rows: Sequence[Sequence[int]]) -> Matrix:
    """
    Row Hermite normal form of the Z-span of ``rows``, zero rows dropped.

    Pivots are positive, entries above a pivot lie in [0, pivot), and
    pivot columns strictly increase down the rows.
    """
    a = [list(map(int, r)) for r in rows if any(r)]
    if not a:
        return []
    ncols = len(a[0])
    r0 = 0
    for col in range(ncols):
        # gather rows r0.. with a nonzero in this column and run a gcd sweep
        while True:
            nz = [i for i in range(r0, len(a)) if a[i][col] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(a[i][col]))
            a[r0], a[piv] = a[piv], a[r0]
            done = True
            for i in range(r0 + 1, len(a)):
                if a[i][col]:
                    f = a[i][col] // a[r0][col]
                    a[i] = [x - f * y for x, y in zip(a[i], a[r0])]
                    if a[i][col]:
                        done = False
            if done:
                break
        if r0 < len(a) and a[r0][col] != 0:
            if a[r0][col] < 0:
                a[r0] = [-x for x in a[r0]]
            p = a[r0][col]
            for i in range(r0):
                f = a[i][col] // p
                if f:
                    a[i] = [x - f * y for x, y in zip(a[i], a[r0])]
            r0 += 1
            if r0 == len(a):
                break
    return [r for r in a[:r0] if any(r)]


def pivots(h: Matrix) -> list[int]:
    return [next(j for j, x in enumerate(r) if x) for r in h]


def reduce_mod(h: Matrix, v: Sequence[int]) -> tuple[list[int], list[int]]:
    """
    Reduce ``v`` by an HNF basis. Returns (remainder, coefficients); the
    remainder is zero exactly when v lies in the lattice, and then
    v = sum coefficients[i] * h[i].
    """
    v = list(map(int, v))
    coef = []
    for row, p in zip(h, pivots(h)):
        f = v[p] // row[p]  # floor keeps the remainder canonical off the lattice
        coef.append(f)
        if f:
            v = [x - f * y for x, y in zip(v, row)]
    return v, coef


def in_lattice(h: Matrix, v: Sequence[int]) -> bool:
    rem, _ = reduce_mod(h, v)
    return not any(rem)


def rref(rows: Sequence[Sequence], ncols: int | None = None) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q, with its pivot columns."""
    a = [[Fraction(x) for x in r] for r in rows]
    if not a:
        return [], []
    n = ncols if ncols is not None else len(a[0])
    piv: list[int] = []
    r = 0
    for c in range(n):
        k = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if k is None:
            continue
        a[r], a[k] = a[k], a[r]
        p = a[r][c]
        a[r] = [x / p for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        piv.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], piv


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[list[int]]:
    """Integer vectors spanning (over Q) the right null space of ``rows``."""
    red, piv = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(red, piv):
            v[p] = -row[f]
        basis.append(_primitive(v))
    return basis


def left_nullspace(rows: Sequence[Sequence], nrows: int | None = None) -> list[list[int]]:
    """Integer vectors y spanning {y : y^T A = 0}."""
    m = len(rows) if nrows is None else nrows
    if m == 0:
        return []
    ncols = len(rows[0])
    at = [[rows[i][j] for i in range(m)] for j in range(ncols)]
    return nullspace(at, m)


def solve(rows: Sequence[Sequence], rhs: Sequence) -> list[Fraction] | None:
    """One rational solution x of A x = rhs (free variables 0), or None."""
    if not rows:
        return [] if not any(rhs) else None
    ncols = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, piv = rref(aug, ncols + 1)
    if ncols in piv:
        return None
    x = [Fraction(0)] * ncols
    for row, p in zip(red, piv):
        x[p] = row[ncols]
    return x


def _primitive(v: Sequence[Fraction]) -> list[int]:
    den = 1
    for x in v:
        den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
    w = [int(Fraction(x) * den) for x in v]
    g = 0
    for x in w:
        g = gcd(g, x)
    return [x // g for x in w] if g else w
