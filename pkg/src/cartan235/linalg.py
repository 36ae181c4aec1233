"""Exact linear algebra over the rationals.

Rows are sparse: ``dict[int, Fraction]`` from column index to a nonzero entry.
Dense lists are accepted anywhere a matrix is expected.  The systems arising
from the prolongation and the symmetry solver are large but very sparse, which
is why elimination works on dicts instead of arrays.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

SparseRow = dict[int, Fraction]


def sparse(row) -> SparseRow:
    if isinstance(row, dict):
        return {j: Fraction(v) for j, v in row.items() if v}
    return {j: Fraction(v) for j, v in enumerate(row) if v}


def _axpy(target: SparseRow, factor: Fraction, source: SparseRow) -> None:
    # target -= factor * source, in place
    for j, v in source.items():
        s = target.get(j)
        if s is None:
            target[j] = -factor * v
        else:
            s -= factor * v
            if s:
                target[j] = s
            else:
                del target[j]


def rref(rows: Iterable, ncols: int) -> tuple[list[SparseRow], list[int]]:
    """Reduced row echelon form.

    Returns the nonzero reduced rows (each with leading entry 1) and their
    pivot columns, sorted by pivot.  The result is canonical: it depends only
    on the row space, not on the order or scaling of the input rows.
    """
    pivot_rows: dict[int, SparseRow] = {}
    for raw in rows:
        row = sparse(raw)
        if any(j >= ncols or j < 0 for j in row):
            raise ValueError("row entry outside the column range")
        # pivot rows are zero in every other pivot column, so one pass suffices
        for p in sorted(set(row) & pivot_rows.keys()):
            c = row.get(p)
            if c:
                _axpy(row, c, pivot_rows[p])
        if not row:
            continue
        lead = min(row)
        inv = 1 / row[lead]
        row = {j: v * inv for j, v in row.items()}
        for other in pivot_rows.values():
            c = other.get(lead)
            if c:
                _axpy(other, c, row)
        pivot_rows[lead] = row
    pivots = sorted(pivot_rows)
    return [pivot_rows[p] for p in pivots], pivots


def rank(rows: Iterable, ncols: int) -> int:
    return len(rref(rows, ncols)[1])


def nullspace(rows: Iterable, ncols: int) -> list[list[Fraction]]:
    """Basis of {v : A v = 0}, one vector per free column, in column order.

    Each basis vector has a 1 in its free column and zeros in the other free
    columns, so the basis is fixed by the canonical echelon form.
    """
    return nullspace_with_free(rows, ncols)[0]


def nullspace_with_free(rows: Iterable, ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Like ``nullspace`` but also returns the free column of each vector.

    The coordinates of a kernel vector v in this basis are simply v[free].
    """
    reduced, pivots = rref(rows, ncols)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for row, p in zip(reduced, pivots):
            c = row.get(free)
            if c:
                v[p] = -c
        basis.append(v)
    free_cols = [c for c in range(ncols) if c not in pivot_set]
    return basis, free_cols


def det(matrix: Sequence[Sequence]) -> Fraction:
    """Determinant by exact Gaussian elimination."""
    m = [[Fraction(x) for x in row] for row in matrix]
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("determinant of a non-square matrix")
    result = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            result = -result
        p = m[col][col]
        result *= p
        for r in range(col + 1, n):
            f = m[r][col] / p
            if f:
                for c in range(col, n):
                    m[r][c] -= f * m[col][c]
    return result


def solve_in_span(basis: Sequence[Sequence], target: Sequence) -> list[Fraction] | None:
    """Coefficients c with sum c_i basis[i] == target, or None if not in the span.

    ``basis`` must be linearly independent.
    """
    k = len(basis)
    if k == 0:
        return [] if not any(target) else None
    n = len(basis[0])
    # unknowns c_0..c_{k-1}, augmented column k; one equation per coordinate
    rows = []
    for j in range(n):
        row = {i: Fraction(basis[i][j]) for i in range(k) if basis[i][j]}
        if target[j]:
            row[k] = -Fraction(target[j])
        if row:
            rows.append(row)
    reduced, pivots = rref(rows, k + 1)
    if k in pivots:
        return None
    if len(pivots) != k:
        raise ValueError("basis vectors are linearly dependent")
    coeffs = [Fraction(0)] * k
    for row, p in zip(reduced, pivots):
        coeffs[p] = -row.get(k, Fraction(0))
    return coeffs


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in zip(*b)] for row in a]


def transpose(a: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*a)]
