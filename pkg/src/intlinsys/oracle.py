"""Exact rational solves of point systems, used as an independent containment oracle."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np


def solve_exact(a: np.ndarray, b: np.ndarray) -> list[Fraction]:
    """Solve ``a x = b`` exactly over the rationals (float entries are dyadic, so exact)."""
    n = len(b)
    m = [[Fraction(float(a[i, j])) for j in range(n)] + [Fraction(float(b[i]))] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("point matrix is singular")
        m[col], m[piv] = m[piv], m[col]
        pr = m[col]
        inv = 1 / pr[col]
        for r in range(col + 1, n):
            f = m[r][col]
            if f:
                f *= inv
                row = m[r]
                for c in range(col, n + 1):
                    row[c] -= f * pr[c]
    x = [Fraction(0)] * n
    for i in reversed(range(n)):
        s = m[i][n] - sum(m[i][j] * x[j] for j in range(i + 1, n))
        x[i] = s / m[i][i]
    return x


def inside(lo: Sequence[float], hi: Sequence[float], x: Sequence[Fraction]) -> bool:
    """Exact test ``lo <= x <= hi`` componentwise."""
    return all(Fraction(float(l)) <= xi <= Fraction(float(h)) for l, h, xi in zip(lo, hi, x))
