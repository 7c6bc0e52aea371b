"""Exact linear algebra over ``Q`` and ``Z_p`` on plain Python lists."""

from __future__ import annotations

from typing import Sequence

from .poly import CoefficientRing


def rref(rows: Sequence[Sequence], R: CoefficientRing) -> tuple[list[list], list[int]]:
    """Reduced row echelon form; returns the nonzero rows and their pivot columns."""
    a = [[R(x) for x in row] for row in rows]
    ncols = len(a[0]) if a else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = R.inv(a[r][c])
        a[r] = [R(x * inv) for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [R(x - f * y) for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def rank(rows: Sequence[Sequence], R: CoefficientRing) -> int:
    return len(rref(rows, R)[1])


def matvec(m: Sequence[Sequence], v: Sequence, R: CoefficientRing) -> list:
    return [R(sum(x * y for x, y in zip(row, v))) for row in m]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence], R: CoefficientRing) -> list[list]:
    cols = list(zip(*b))
    return [[R(sum(x * y for x, y in zip(row, col))) for col in cols] for row in a]


def eye(n: int, R: CoefficientRing) -> list[list]:
    return [[R(int(i == j)) for j in range(n)] for i in range(n)]


def first_dependency(vectors: Sequence[Sequence], R: CoefficientRing) -> list | None:
    """Coefficients ``c`` with ``sum c_j v_j = 0`` and ``c_last = 1``, if the last
    vector depends on the earlier ones; None otherwise."""
    n = len(vectors)
    if n == 0:
        return None
    width = len(vectors[0])
    # columns are the vectors; solve sum_{j<n-1} c_j v_j = -v_last
    aug = [[vectors[j][i] for j in range(n - 1)] + [R(-vectors[-1][i])] for i in range(width)]
    if not aug:
        return [R(1)] if n == 1 else [R(0)] * (n - 1) + [R(1)]
    red, piv = rref(aug, R)
    if n - 1 in piv:
        return None
    sol = [R(0)] * (n - 1)
    for row, c in zip(red, piv):
        sol[c] = row[-1]
    return sol + [R(1)]
