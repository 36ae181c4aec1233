import pytest

from cartan235.algebra import (InvalidAlgebraError, StratifiedAlgebra, abelian_algebra,
                               cartan_algebra, heisenberg_algebra)
from cartan235.prolongation import (derivation_residual, faithful, grading_derivation,
                                    level_dimensions, prolong, rigidity_report)
from cartan235.symmetry import solve_symmetries


def test_cartan_levels():
    assert level_dimensions(cartan_algebra(), 4) == (4, 2, 1, 2, 0)
    rep = rigidity_report(cartan_algebra(), 5)
    assert rep.verdict == "rigid"
    assert rep.dims == (4, 2, 1, 2, 0, 0)
    assert rep.first_vanishing_level == 4
    assert rep.total_dim == 14


def test_rigid_even_when_cutoff_is_the_first_zero():
    # the extra confirming level is computed automatically
    rep = rigidity_report(cartan_algebra(), 4)
    assert rep.verdict == "rigid" and rep.total_dim == 14


def test_matches_symmetry_grading():
    P = prolong(cartan_algebra(), 4)
    layers = {-w: n for w, n in zip((1, 2, 3), cartan_algebra().layer_dims)}
    grading = {**layers, **{k: d for k, d in enumerate(P.dims) if d}}
    assert grading == solve_symmetries(6, structure=False).grading()


def test_level_zero_is_graded_derivations():
    A = cartan_algebra()
    P = prolong(A, 0)
    for u in P.levels[0].basis:
        assert derivation_residual(A, u) == []
    assert derivation_residual(A, grading_derivation(A)) == []
    assert faithful(prolong(A, 3))


@pytest.mark.parametrize("make,dims", [
    (lambda: abelian_algebra(2), (4, 6, 8, 10, 12)),
    # contact generating functions of weighted degree k + 2 in (x, y, z)
    (heisenberg_algebra, (4, 6, 9, 12, 16)),
])
def test_flexible_algebras(make, dims):
    rep = rigidity_report(make(), 4)
    assert rep.verdict == "undetermined"
    assert rep.dims == dims
    assert rep.total_dim is None


def test_abelian_level_dims_formula():
    # level k of the abelian R^n prolongation is n * C(n+k, k+1)
    from math import comb
    n = 3
    assert level_dimensions(abelian_algebra(n), 3) == tuple(n * comb(n + k, k + 1) for k in range(4))


def test_invalid_algebra():
    bad = StratifiedAlgebra.from_json({"dim": 3, "weights": [1, 1, 2], "brackets": [
        {"i": 0, "j": 1, "result": [0, 0, 1]}, {"i": 0, "j": 2, "result": [0, 0, 1]}]})
    with pytest.raises(InvalidAlgebraError):
        prolong(bad, 2)
    with pytest.raises(ValueError):
        prolong(cartan_algebra(), -1)
