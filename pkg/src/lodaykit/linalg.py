"""Exact linear algebra over Q on plain lists of Fractions."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list  # list of rows, each a list of Fraction
Vector = list


def zeros(rows: int, cols: int) -> Matrix:
    return [[Fraction(0)] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    m = zeros(n, n)
    for i in range(n):
        m[i][i] = Fraction(1)
    return m


def to_fractions(m: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) for x in row] for row in m]


def transpose(m: Matrix, cols: int | None = None) -> Matrix:
    if not m:
        return [[] for _ in range(cols or 0)]
    return [list(col) for col in zip(*m)]


def matmul(a: Matrix, b: Matrix, inner: int | None = None) -> Matrix:
    """Product ``a @ b``; ``inner`` fixes the shape when either side has no rows."""
    rows = len(a)
    k = len(b) if inner is None else inner
    cols = len(b[0]) if b else 0
    out = zeros(rows, cols)
    for i in range(rows):
        ai = a[i]
        oi = out[i]
        for t in range(k):
            x = ai[t]
            if x:
                bt = b[t]
                for j in range(cols):
                    if bt[j]:
                        oi[j] += x * bt[j]
    return out


def matvec(a: Matrix, v: Vector) -> Vector:
    return [sum((x * y for x, y in zip(row, v) if x and y), Fraction(0)) for row in a]


def is_zero_matrix(m: Matrix) -> bool:
    return all(not x for row in m for x in row)


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns. The input is not modified."""
    a = [list(row) for row in m]
    rows = len(a)
    cols = len(a[0]) if a else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        p = next((i for i in range(r, rows) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        pivot_row = a[r]
        for i in range(rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], pivot_row)]
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m: Matrix) -> int:
    return len(rref(m)[1])


def nullspace(m: Matrix, cols: int | None = None) -> list[Vector]:
    """Basis of ``{v : m v = 0}``, one vector per free column, in column order."""
    ncols = len(m[0]) if m else (cols or 0)
    if not m:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    r, pivots = rref(m)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row_idx, pc in enumerate(pivots):
            v[pc] = -r[row_idx][f]
        basis.append(v)
    return basis


def solve(a: Matrix, b: Vector, cols: int | None = None) -> Vector | None:
    """One solution of ``a x = b`` (free variables set to zero), or None."""
    ncols = len(a[0]) if a else (cols or 0)
    aug = [list(row) + [bi] for row, bi in zip(a, b)]
    if not aug:
        return [Fraction(0)] * ncols
    r, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row_idx, pc in enumerate(pivots):
        x[pc] = r[row_idx][ncols]
    return x


def det(m: Matrix) -> Fraction:
    n = len(m)
    if n == 0:
        return Fraction(1)
    a = [list(map(Fraction, row)) for row in m]
    sign = 1
    result = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            sign = -sign
        piv = a[c][c]
        result *= piv
        for i in range(c + 1, n):
            if a[i][c]:
                f = a[i][c] / piv
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return sign * result


def inverse(m: Matrix) -> Matrix:
    n = len(m)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    r, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in r]


def column_space_basis(vectors: list[Vector], dim: int) -> list[Vector]:
    """Maximal independent subset of ``vectors`` (greedy, in order)."""
    if not vectors:
        return []
    cols = transpose(vectors) if vectors else [[] for _ in range(dim)]
    _, pivots = rref(cols)
    return [vectors[p] for p in pivots]


def extend_modulo(base: list[Vector], candidates: list[Vector], dim: int) -> list[Vector]:
    """Candidates that are independent of ``base`` and of earlier picks (greedy)."""
    allv = list(base) + list(candidates)
    if not allv:
        return []
    _, pivots = rref(transpose(allv))
    nb = len(base)
    return [candidates[p - nb] for p in pivots if p >= nb]
