"""Exact integer/rational linear algebra (no floating point)."""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence


class RowEchelon:
    """Incrementally maintained integer row-echelon basis.

    Rows are reduced fraction-free (cross-multiplication) and divided by the
    gcd of their entries so coefficients stay small.
    """

    def __init__(self, width: int):
        self.width = width
        self.rows: list[list[int]] = []
        self.pivots: list[int] = []

    @property
    def rank(self) -> int:
        return len(self.rows)

    def add(self, row: Sequence[int]) -> bool:
        """Insert ``row``; True if it was independent of the current basis."""
        r = list(row)
        if len(r) != self.width:
            raise ValueError(f"row of width {len(r)}, expected {self.width}")
        for basis, p in zip(self.rows, self.pivots):
            c = r[p]
            if c:
                b = basis[p]
                r = [b * x - c * y for x, y in zip(r, basis)]
        pivot = next((k for k, x in enumerate(r) if x), None)
        if pivot is None:
            return False
        g = 0
        for x in r:
            g = gcd(g, x)
        if r[pivot] < 0:
            g = -g
        r = [x // g for x in r]
        # clear the new pivot column from older rows to keep pivots distinct
        for t, basis in enumerate(self.rows):
            c = basis[pivot]
            if c:
                nb = [r[pivot] * x - c * y for x, y in zip(basis, r)]
                h = 0
                for x in nb:
                    h = gcd(h, x)
                self.rows[t] = [x // h for x in nb] if h else nb
        self.rows.append(r)
        self.pivots.append(pivot)
        return True


def rank(rows: Iterable[Sequence[int]], width: int | None = None) -> int:
    rows = list(rows)
    if not rows:
        return 0
    ech = RowEchelon(width if width is not None else len(rows[0]))
    for r in rows:
        ech.add(r)
        if ech.rank == ech.width:
            break
    return ech.rank


def affine_dimension(points: Iterable[Sequence[int]], width: int) -> int:
    """Dimension of the affine hull; -1 for no points."""
    ech = RowEchelon(width + 1)
    any_point = False
    for p in points:
        any_point = True
        ech.add([1, *p])
        if ech.rank == width + 1:
            break
    return ech.rank - 1 if any_point else -1


def solve(a: Sequence[Sequence[int]], b: Sequence[int]) -> list[Fraction] | None:
    """Unique solution of the square system ``a x = b`` over Q, or None if singular."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(rhs)] for row, rhs in zip(a, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [m[r][n] for r in range(n)]
