import random
from fractions import Fraction

import pytest

from cartan235.linalg import det, matmul, nullspace, rank, rref, solve_in_span, transpose


def rand_matrix(rng, r, c, density=0.6):
    return [[Fraction(rng.randint(-4, 4), rng.randint(1, 3)) if rng.random() < density else Fraction(0)
             for _ in range(c)] for _ in range(r)]


def test_nullspace_is_kernel_and_complements_rank(rng):
    for _ in range(40):
        r, c = rng.randint(1, 7), rng.randint(1, 8)
        m = rand_matrix(rng, r, c)
        ker = nullspace(m, c)
        assert len(ker) + rank(m, c) == c
        for v in ker:
            assert all(sum(a * b for a, b in zip(row, v)) == 0 for row in m)


def test_rref_is_canonical(rng):
    m = rand_matrix(rng, 5, 7)
    shuffled = [list(map(lambda x: 3 * x, row)) for row in reversed(m)]
    assert rref(m, 7) == rref(shuffled, 7)


def test_rref_with_dependent_rows():
    rows = [[1, 2, 3], [2, 4, 6], [0, 1, 1]]
    reduced, piv = rref(rows, 3)
    assert piv == [0, 1]
    assert reduced[0] == {0: 1, 2: 1}


def test_det_matches_cofactor(rng):
    def cof(m):
        if len(m) == 1:
            return m[0][0]
        return sum((-1) ** j * m[0][j] * cof([row[:j] + row[j + 1:] for row in m[1:]])
                   for j in range(len(m)))
    for n in range(1, 5):
        m = rand_matrix(rng, n, n)
        assert det(m) == cof(m)


def test_det_multiplicative(rng):
    a, b = rand_matrix(rng, 4, 4, 1), rand_matrix(rng, 4, 4, 1)
    assert det(matmul(a, b)) == det(a) * det(b)
    assert det(transpose(a)) == det(a)


def test_solve_in_span():
    basis = [[1, 0, 1], [0, 1, 1]]
    assert solve_in_span(basis, [2, 3, 5]) == [2, 3]
    assert solve_in_span(basis, [1, 1, 0]) is None
    assert solve_in_span([], [0, 0]) == []


def test_bad_column_index():
    with pytest.raises(ValueError):
        rref([{5: 1}], 3)
    with pytest.raises(ValueError):
        det([[1, 2]])
