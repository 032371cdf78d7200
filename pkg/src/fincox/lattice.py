"""Exact integer linear algebra: Hermite and Smith normal forms, determinants, solves.

Lattices are given by generating *rows*.  Everything here works on plain Python
ints (or Fractions where a rational solve is unavoidable), never floats.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list[int]]


def _as_int_rows(rows: Sequence[Sequence[int]]) -> Matrix:
    return [[int(a) for a in row] for row in rows]


def determinant(m: Sequence[Sequence[int]]) -> int:
    """Fraction-free (Bareiss) determinant of a square integer matrix."""
    a = _as_int_rows(m)
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("determinant needs a square matrix")
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if a[r][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def hermite_normal_form(rows: Sequence[Sequence[int]]) -> Matrix:
    """Row-style Hermite normal form of the lattice spanned by ``rows``.

    The result is upper triangular in echelon shape, pivots are positive and the
    entries above each pivot lie in ``[0, pivot)``.  Zero rows are dropped, so two
    generating sets span the same lattice iff their normal forms are equal.
    """
    a = _as_int_rows(rows)
    if not a:
        return []
    m, n = len(a), len(a[0])
    top = 0
    for col in range(n):
        if top == m:
            break
        while True:
            live = [r for r in range(top, m) if a[r][col] != 0]
            if not live:
                break
            best = min(live, key=lambda r: abs(a[r][col]))
            a[top], a[best] = a[best], a[top]
            clean = True
            for r in range(top + 1, m):
                if a[r][col]:
                    q = a[r][col] // a[top][col]
                    a[r] = [x - q * y for x, y in zip(a[r], a[top])]
                    clean = clean and a[r][col] == 0
            if clean:
                break
        if a[top][col] == 0:
            continue
        if a[top][col] < 0:
            a[top] = [-x for x in a[top]]
        p = a[top][col]
        for r in range(top):
            q = a[r][col] // p
            if q:
                a[r] = [x - q * y for x, y in zip(a[r], a[top])]
        top += 1
    return a[:top]


def pivot_columns(hnf: Matrix) -> list[int]:
    cols = []
    for row in hnf:
        cols.append(next(j for j, x in enumerate(row) if x != 0))
    return cols


def reduce_mod_lattice(v: Sequence[int], hnf: Matrix) -> tuple[int, ...]:
    """Canonical representative of ``v`` modulo a lattice given in Hermite normal form.

    Coordinates at pivot columns end up in ``[0, pivot)``; applying it twice is a
    no-op.
    """
    out = [int(x) for x in v]
    for row, col in zip(hnf, pivot_columns(hnf)):
        q = out[col] // row[col]
        if q:
            out = [x - q * y for x, y in zip(out, row)]
    return tuple(out)


def in_lattice(v: Sequence[int], hnf: Matrix) -> bool:
    return not any(reduce_mod_lattice(v, hnf))


def smith_invariants(rows: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero elementary divisors d1 | d2 | ... of an integer matrix."""
    a = _as_int_rows(rows)
    if not a or not a[0]:
        return []
    m, n = len(a), len(a[0])
    divisors = []
    t = 0
    while t < min(m, n):
        nz = [(abs(a[i][j]), i, j) for i in range(t, m) for j in range(t, n) if a[i][j]]
        if not nz:
            break
        _, i0, j0 = min(nz)
        a[t], a[i0] = a[i0], a[t]
        for row in a:
            row[t], row[j0] = row[j0], row[t]
        while True:
            p = a[t][t]
            changed = False
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // p
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                    if a[i][t]:
                        a[t], a[i] = a[i], a[t]
                        changed = True
                        break
            if changed:
                continue
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // p
                    for row in a:
                        row[j] -= q * row[t]
                    if a[t][j]:
                        for row in a:
                            row[t], row[j] = row[j], row[t]
                        changed = True
                        break
            if changed:
                continue
            # pivot must divide the remaining block, else fold an offending row in
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            a[t] = [x + y for x, y in zip(a[t], a[bad])]
        divisors.append(abs(a[t][t]))
        t += 1
    return divisors


def solve_rational(m: Sequence[Sequence[int]], b: Sequence[int]) -> list[Fraction]:
    """Solve ``m x = b`` exactly for square nonsingular ``m``."""
    n = len(m)
    aug = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(m, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ValueError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n] for row in aug]


def solve_integer(m: Sequence[Sequence[int]], b: Sequence[int]) -> tuple[int, ...] | None:
    """Integer solution of ``m x = b`` for square nonsingular ``m``, or None."""
    x = solve_rational(m, b)
    if any(v.denominator != 1 for v in x):
        return None
    return tuple(int(v) for v in x)


def integer_inverse(m: Sequence[Sequence[int]]) -> Matrix:
    """Inverse of a unimodular integer matrix."""
    n = len(m)
    cols = []
    for j in range(n):
        e = [1 if i == j else 0 for i in range(n)]
        col = solve_integer(m, e)
        if col is None:
            raise ValueError("matrix is not invertible over the integers")
        cols.append(col)
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def transpose(m: Sequence[Sequence[int]]) -> Matrix:
    return [list(col) for col in zip(*m)]


def column_lattice_hnf(m: Sequence[Sequence[int]]) -> Matrix:
    """Hermite basis (as rows) of the lattice spanned by the columns of ``m``."""
    return hermite_normal_form(transpose(m))
