from fractions import Fraction

from cartan235.frames import (OneForm, VectorField, bracket, build_frame, certify_brackets,
                              certify_duality, certify_frames_commute, coframe, left_frame,
                              pair, pullback, pushforward, reference_coframe, reference_frame,
                              right_frame, sublaplacian)
from cartan235.group import dilation_map, translation_map
from cartan235.maps import PolyMap
from cartan235.poly import Poly, variables

x1, x2, y, z1, z2 = variables()
X1, X2, Y, Z1, Z2 = left_frame()


def test_left_frame_matches_reference():
    assert left_frame() == reference_frame()
    assert build_frame("left") == left_frame()


def test_x1_components():
    h = Fraction(1, 2)
    assert X1.coeffs == (Poly.one(), Poly.zero(), -h * x2, -h * (y + x1 * x2 / 6), -(x2**2) / 12)


def test_frames_at_origin_are_coordinate():
    for side in ("left", "right"):
        for j, V in enumerate(build_frame(side)):
            assert V.at_origin() == tuple(1 if k == j else 0 for k in range(5))


def test_right_frame_center():
    R = right_frame()
    assert R[3] == Z1 and R[4] == Z2


def test_bracket_table():
    assert certify_brackets() == []
    assert bracket(X1, X2) == Y
    assert bracket(X1, Z1).is_zero()
    assert bracket(Y, X1) == -Z1
    assert bracket(X2, Y) == Z2


def test_left_right_commute():
    assert certify_frames_commute() == []


def test_coframe_duality():
    assert certify_duality() == []
    eta1, eta2, theta, iota1, iota2 = coframe()
    assert pair(theta, Y) == 1
    assert pair(iota1, X2) == 0
    assert pair(theta, X1) == 0
    assert theta.coeffs[2] == 1


def test_coframe_matches_corrected_reference():
    assert coframe() == reference_coframe()


def test_plus_sign_dy_in_iota1_breaks_duality():
    iota1 = reference_coframe(dy_sign_iota1=+1)[3]
    assert pair(iota1, Y) == x1


def test_pair_basics():
    assert pair(OneForm.coordinate(0), VectorField.coordinate(0)) == 1
    ident = PolyMap.identity()
    theta = coframe()[2]
    assert pair(pullback(ident, theta), Z2) == 0


def test_pullback_examples():
    for omega in coframe():
        assert pullback(PolyMap.identity(), omega) == omega
    d2 = dilation_map(2)
    assert pullback(d2, OneForm.coordinate(0)) == OneForm((2, 0, 0, 0, 0))


def test_pullback_functorial(rng):
    from cartan235.families import random_poly_map
    f = random_poly_map(rng, 2, 4)
    g = random_poly_map(rng, 2, 4)
    for omega in coframe():
        assert pullback(f.after(g), omega) == pullback(g, pullback(f, omega))


def test_left_translations_preserve_left_frame(rng):
    from cartan235.families import random_point
    pair_ = translation_map(random_point(rng))
    for V in left_frame():
        assert pushforward(pair_, V) == V


def test_sublaplacian():
    assert sublaplacian(Poly.const(3)) == 0
    assert sublaplacian(x1**2) == 2
    assert sublaplacian(y) == 0
