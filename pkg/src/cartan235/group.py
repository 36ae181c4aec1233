"""The Cartan group as R^5 with a polynomial product.

Points are plain 5-tuples.  ``group_mul`` is written once over generic
scalars, so the same code serves exact rationals, floats, and polynomials;
evaluating it on symbols yields the group law as polynomials.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .algebra import StratifiedAlgebra, cartan_algebra
from .maps import PolyMap, PolyMapPair
from .poly import NVARS, WEIGHTS, Poly, to_fraction, variables

HALF = Fraction(1, 2)
TWELFTH = Fraction(1, 12)

IDENTITY = (Fraction(0),) * NVARS


def group_mul(p: Sequence, q: Sequence) -> tuple:
    x1, x2, y, z1, z2 = p
    u1, u2, v, w1, w2 = q
    c = x1 * u2 - x2 * u1
    return (
        x1 + u1,
        x2 + u2,
        y + v + HALF * c,
        z1 + w1 + HALF * (x1 * v - y * u1) + TWELFTH * ((x1 - u1) * c),
        z2 + w2 + HALF * (x2 * v - y * u2) + TWELFTH * ((x2 - u2) * c),
    )


def group_inv(p: Sequence) -> tuple:
    # exponential coordinates: the inverse is the negative (see certify_inverse)
    return tuple(-x for x in p)


def dilate(r, p: Sequence) -> tuple:
    if isinstance(r, Poly):
        pass
    elif r <= 0:
        raise ValueError(f"dilation factor must be positive, got {r}")
    return tuple(r**w * x for w, x in zip(WEIGHTS, p))


def symbols(copies: int, extra: int = 0) -> list[tuple[Poly, ...]]:
    """``copies`` independent coordinate 5-tuples in one polynomial ring.

    ``extra`` additional variables are appended after the copies; they are
    returned as a final tuple when requested.
    """
    n = NVARS * copies + extra
    gens = variables(n)
    out = [gens[NVARS * k: NVARS * (k + 1)] for k in range(copies)]
    if extra:
        out.append(gens[NVARS * copies:])
    return out


@lru_cache(maxsize=None)
def group_law() -> tuple[Poly, ...]:
    """P1..P5 as polynomials in 10 symbols (x, then x')."""
    p, q = symbols(2)
    return group_mul(p, q)


def translation_map(p: Sequence, side: str = "left") -> PolyMapPair:
    """q ↦ p·q (left) or q ↦ q·p (right), paired with translation by p⁻¹."""
    p = tuple(to_fraction(x) for x in p)
    q = variables()
    if side == "left":
        f = group_mul(p, q)
        g = group_mul(group_inv(p), q)
    elif side == "right":
        f = group_mul(q, p)
        g = group_mul(q, group_inv(p))
    else:
        raise ValueError(f"side must be 'left' or 'right', not {side!r}")
    return PolyMapPair(PolyMap(f), PolyMap(g))


def dilation_map(r) -> PolyMapPair:
    r = to_fraction(r)
    q = variables()
    return PolyMapPair(PolyMap(dilate(r, q)), PolyMap(dilate(1 / r, q)))


def automorphism_map(a, b, c, d) -> PolyMapPair:
    """Graded automorphism induced by X1 ↦ aX1 + cX2, X2 ↦ bX1 + dX2.

    It acts linearly in these coordinates: Y scales by the determinant and
    (Z1, Z2) transforms by the determinant times the same 2x2 matrix.
    """
    a, b, c, d = (to_fraction(t) for t in (a, b, c, d))
    det = a * d - b * c
    if not det:
        raise ValueError("automorphism matrix must be invertible")

    def build(a, b, c, d):
        x1, x2, y, z1, z2 = variables()
        det = a * d - b * c
        return PolyMap((
            a * x1 + b * x2,
            c * x1 + d * x2,
            det * y,
            det * (a * z1 + b * z2),
            det * (c * z1 + d * z2),
        ))

    inv = (d / det, -b / det, -c / det, a / det)
    return PolyMapPair(build(a, b, c, d), build(*inv))


def bch3(algebra: StratifiedAlgebra, a: Sequence, b: Sequence) -> list:
    """Baker-Campbell-Hausdorff product truncated after third order.

    a·b = a + b + ½[a,b] + (1/12)([a,[a,b]] − [b,[a,b]]), exact for algebras
    in which every 4-fold bracket vanishes.
    """
    require_step3(algebra)
    ab = algebra.bracket(a, b)
    aab = algebra.bracket(a, ab)
    bab = algebra.bracket(b, ab)
    return [
        ai + bi + HALF * cab + TWELFTH * (x - y)
        for ai, bi, cab, x, y in zip(a, b, ab, aab, bab)
    ]


def require_step3(algebra: StratifiedAlgebra) -> None:
    n = algebra.dim
    for i in range(n):
        for j in range(n):
            for k in range(n):
                inner = algebra.bracket(algebra.unit(j), algebra.basis_bracket(k, i))
                if not any(inner):
                    continue
                for l in range(n):
                    if any(algebra.bracket(algebra.unit(l), inner)):
                        raise ValueError(
                            "algebra has a nonzero 4-fold bracket; third-order BCH is not exact")


# -- symbolic certificates ---------------------------------------------------
# Each returns the list of nonzero residual polynomials (empty means certified).

def certify_associativity() -> list[Poly]:
    p, q, r = symbols(3)
    lhs = group_mul(group_mul(p, q), r)
    rhs = group_mul(p, group_mul(q, r))
    return [d for d in (l - r_ for l, r_ in zip(lhs, rhs)) if d]


def certify_inverse() -> list[Poly]:
    (p,) = symbols(1)
    residual = list(group_mul(p, group_inv(p))) + list(group_mul(group_inv(p), p))
    return [d for d in residual if d]


def certify_identity() -> list[Poly]:
    (p,) = symbols(1)
    zero = (Poly.zero(),) * NVARS
    residual = [a - b for a, b in zip(group_mul(p, zero), p)]
    residual += [a - b for a, b in zip(group_mul(zero, p), p)]
    return [d for d in residual if d]


def certify_bch() -> list[Poly]:
    p, q = symbols(2)
    law = group_law()
    rebuilt = bch3(cartan_algebra(), list(p), list(q))
    return [d for d in (a - b for a, b in zip(law, rebuilt)) if d]


def certify_dilation() -> list[Poly]:
    """δ_r is a homomorphism and δ_r∘δ_s = δ_rs, with r, s symbolic."""
    p, q, (r, s) = symbols(2, extra=2)
    lhs = dilate(r, group_mul(p, q))
    rhs = group_mul(dilate(r, p), dilate(r, q))
    residual = [a - b for a, b in zip(lhs, rhs)]
    residual += [a - b for a, b in zip(dilate(r, dilate(s, p)), dilate(r * s, p))]
    return [d for d in residual if d]
