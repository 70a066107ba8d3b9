"""Exact linear algebra over QQ and over truncated series rings.

The series solver treats the truncated series ring as a local ring: an
entry is a usable pivot exactly when its constant term is a unit.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import DomainError, StructuralError
from .series import MultiSeries, unit_inverse


def rank(rows: Sequence[Sequence]) -> int:
    """Rank of a rational matrix by fraction-exact elimination."""
    m = [[Fraction(x) for x in row] for row in rows]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][col]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][col]
        for i in range(r + 1, len(m)):
            if m[i][col]:
                f = m[i][col] * inv
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r


def inverse(matrix: Sequence[Sequence]) -> tuple:
    """Inverse of a square rational matrix (Gauss-Jordan)."""
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise StructuralError("matrix is not square")
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(matrix)]
    for col in range(n):
        piv = next((i for i in range(col, n) if m[i][col]), None)
        if piv is None:
            raise DomainError("matrix is singular")
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        m[col] = [a * inv for a in m[col]]
        for i in range(n):
            if i != col and m[i][col]:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[col])]
    return tuple(tuple(row[n:]) for row in m)


def pivot_rows(columns: Sequence[Sequence], nrows: int) -> tuple[int, ...]:
    """Rows (by increasing index) on which the given rational columns are
    independent: row ``i`` is taken when it raises the rank of the rows
    taken so far.  Raises :class:`DomainError` for rank-deficient input."""
    chosen: list[int] = []
    current: list[list] = []
    for i in range(nrows):
        candidate = current + [[col[i] for col in columns]]
        if rank(candidate) > len(current):
            chosen.append(i)
            current = candidate
            if len(chosen) == len(columns):
                break
    if len(chosen) < len(columns):
        raise DomainError("columns are linearly dependent at the origin")
    return tuple(chosen)


def solve_local(columns: Sequence[Sequence[MultiSeries]], rhs: Sequence[MultiSeries],
                rows: Sequence[int], order: Sequence[int] | None = None) -> list[MultiSeries]:
    """Solve ``sum_b c_b * columns[b][i] = rhs[i]`` for ``i`` in ``rows``.

    ``len(rows)`` must equal the number of columns.  Gauss-Jordan
    elimination over the truncated series ring; columns are eliminated in
    ``order`` (default: left to right) and each takes the first remaining
    row whose entry has a unit constant term.  The solution of a system
    that is invertible at the origin is unique, so ``order`` only changes
    the route, never the answer.
    """
    n = len(columns)
    if len(rows) != n:
        raise StructuralError(f"{len(rows)} rows for {n} unknowns")
    if n == 0:
        return []
    order = list(range(n)) if order is None else list(order)
    if sorted(order) != list(range(n)):
        raise StructuralError("order must be a permutation of the columns")
    mat = [[columns[b][i] for b in range(n)] for i in rows]
    vec = [rhs[i] for i in rows]
    free_rows = list(range(n))
    if order != list(range(n)):
        free_rows.reverse()
    pivot_of: dict[int, int] = {}
    for b in order:
        a = next((a for a in free_rows if mat[a][b].is_unit()), None)
        if a is None:
            raise DomainError("no unit pivot: system is degenerate at the origin")
        free_rows.remove(a)
        pivot_of[b] = a
        inv = unit_inverse(mat[a][b])
        mat[a] = [x * inv for x in mat[a]]
        vec[a] = vec[a] * inv
        for a2 in range(n):
            if a2 == a:
                continue
            f = mat[a2][b]
            if f.is_zero():
                continue
            mat[a2] = [x - f * y for x, y in zip(mat[a2], mat[a])]
            vec[a2] = vec[a2] - f * vec[a]
    return [vec[pivot_of[b]] for b in range(n)]
