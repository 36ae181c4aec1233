from fractions import Fraction

import pytest

from cartan235.families import random_point
from cartan235.frames import bracket, left_frame, right_frame
from cartan235.group import dilation_map, translation_map
from cartan235.maps import PolyMap, PolyMapPair
from cartan235.poly import Poly, variables
from cartan235.symmetry import (ContactField, NotContactError, algebra_diagnostics,
                                bracket_contact, build_induced_field, contact_conditions,
                                is_contact_by_brackets, is_contact_field, solve_symmetries,
                                subalgebra_is_abelian)

x1, x2, y, z1, z2 = variables()
EXPECTED_GRADING = {-3: 2, -2: 1, -1: 2, 0: 4, 1: 2, 2: 1, 3: 2}


@pytest.fixture(scope="module")
def g2():
    return solve_symmetries(6)


def test_conditions_follow_from_brackets():
    labels = [c.label() for c in contact_conditions()]
    assert labels == ["X1 a2 = -a12", "X2 a2 = a11", "X1 a31 = -a2",
                      "X1 a32 = 0", "X2 a31 = 0", "X2 a32 = -a2"]


def test_examples():
    assert is_contact_field(ContactField.of(a31=1)).passed
    right_y = ContactField.of(a2=1, a31=-x1, a32=-x2)
    assert is_contact_field(right_y).passed
    # with the opposite sign [., X1] picks up -2 Z1
    wrong = ContactField.of(a2=1, a31=x1, a32=x2)
    rep = is_contact_field(wrong)
    assert not rep.passed
    V = wrong.to_vector_field()
    assert bracket(V, left_frame()[0]) == left_frame()[3].times(Poly.const(-2))


def test_lone_x1_fails():
    rep = is_contact_field(ContactField.of(a11=1))
    assert not rep.passed
    assert rep.condition == "X2 a2 = a11"
    assert rep.residual == -1


def test_two_checks_agree(rng, g2):
    for f in g2.basis:
        assert is_contact_by_brackets(f)
    for cand in (ContactField.of(a11=1), ContactField.of(a2=1, a31=x1),
                 ContactField.of(a11=x2, a2=y)):
        assert is_contact_by_brackets(cand) == is_contact_field(cand).passed


def test_bracket_contact_examples():
    Z1, Z2 = ContactField.of(a31=1), ContactField.of(a32=1)
    assert bracket_contact(Z1, Z2).is_zero()
    right_y = ContactField.of(a2=1, a31=-x1, a32=-x2)
    assert bracket_contact(right_y, Z1).is_zero()


def test_right_frame_is_contact():
    for V in right_frame():
        assert is_contact_by_brackets(ContactField.from_vector_field(V))


def test_dimension_and_grading(g2):
    assert g2.dim == 14
    assert g2.grading() == EXPECTED_GRADING


@pytest.mark.parametrize("n", [7, 8])
def test_stabilizes(n):
    alg = solve_symmetries(n, structure=False)
    assert alg.dim == 14 and alg.grading() == EXPECTED_GRADING


def test_low_cutoffs():
    assert solve_symmetries(0, structure=False).dim == 2
    dims = [solve_symmetries(n, structure=False).dim for n in range(7)]
    assert dims == sorted(dims)
    with pytest.raises(ValueError):
        solve_symmetries(-1)


def test_negative_part_is_right_invariant(g2):
    # weights -3..-1 span exactly the right-invariant fields
    neg = [f for f, w in zip(g2.basis, g2.weights) if w < 0]
    right = [ContactField.from_vector_field(V) for V in right_frame()]
    from cartan235.linalg import rank

    def flat(field):
        vec = {}
        for k, c in enumerate(field.coeffs):
            for e, v in c.items():
                vec[(k, e)] = v
        return vec

    keys = sorted({k for f in neg + right for k in flat(f)})
    rows = lambda fs: [[flat(f).get(k, 0) for k in keys] for f in fs]
    assert rank(rows(neg), len(keys)) == 5
    assert rank(rows(neg + right), len(keys)) == 5
    members = [i for i, w in enumerate(g2.weights) if w < 0]
    assert not subalgebra_is_abelian(g2, members)


def test_diagnostics(g2):
    d = algebra_diagnostics(g2)
    assert d.closed and d.antisymmetric and d.all_contact
    assert d.jacobi_failures == 0
    assert d.center_dim == 0
    assert d.killing_det != 0
    assert d.ok


def test_weights_are_homogeneous(g2):
    assert [f.weight() for f in g2.basis] == g2.weights


# -- induced fields -------------------------------------------------------------

def test_translation_induces_center(rng):
    fg = translation_map(random_point(rng))
    assert build_induced_field(fg, "X1") == ContactField.of(a31=1)
    assert build_induced_field(fg, "X2") == ContactField.of(a32=1)


@pytest.mark.parametrize("s", [Fraction(2), Fraction(1, 3), Fraction(5, 2)])
def test_dilation_induces_scaled_center(s):
    fg = dilation_map(s)
    assert build_induced_field(fg, "X1") == ContactField.of(a31=s**3)
    assert build_induced_field(fg, "X2") == ContactField.of(a32=s**3)


def test_induced_fields_on_family(family):
    for fg in family:
        for d in ("X1", "X2"):
            assert is_contact_field(build_induced_field(fg, d)).passed


def test_induce_rejects_non_contact():
    shear = PolyMapPair(PolyMap((x1, x2, y, z1 + y, z2)), PolyMap((x1, x2, y, z1 - y, z2)))
    with pytest.raises(NotContactError):
        build_induced_field(shear, "X1")
    with pytest.raises(ValueError):
        build_induced_field(dilation_map(2), "Y")


def test_json(g2):
    data = g2.to_json()
    assert data["dimension"] == 14
    assert len(data["basis"]) == 14
    assert data["grading"]["0"] == 4
