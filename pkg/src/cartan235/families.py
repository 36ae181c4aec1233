"""Seeded generators of test maps: contact families and arbitrary polynomial maps."""

from __future__ import annotations

import random
from fractions import Fraction

from .group import automorphism_map, dilation_map, translation_map
from .maps import PolyMap, PolyMapPair
from .poly import NVARS, Poly, monomial


def random_rational(rng: random.Random, size: int = 5) -> Fraction:
    return Fraction(rng.randint(-size, size), rng.randint(1, size))


def random_point(rng: random.Random, size: int = 5) -> tuple[Fraction, ...]:
    return tuple(random_rational(rng, size) for _ in range(NVARS))


def random_dilation(rng: random.Random) -> PolyMapPair:
    return dilation_map(Fraction(rng.randint(1, 6), rng.randint(1, 4)))


def random_automorphism(rng: random.Random) -> PolyMapPair:
    while True:
        a, b, c, d = (Fraction(rng.randint(-3, 3)) for _ in range(4))
        if a * d - b * c:
            return automorphism_map(a, b, c, d)


def random_contact_map(rng: random.Random) -> PolyMapPair:
    """A left translation, dilation, automorphism, or a composite of two or three.

    Right translations are left out on purpose: they preserve the
    right-invariant distribution, not the horizontal one.
    """
    kind = rng.choice(("translation", "dilation", "automorphism", "composite"))
    if kind == "translation":
        return translation_map(random_point(rng), "left")
    if kind == "dilation":
        return random_dilation(rng)
    if kind == "automorphism":
        return random_automorphism(rng)
    parts = [rng.choice((lambda: translation_map(random_point(rng, 3), "left"),
                         lambda: random_dilation(rng),
                         lambda: random_automorphism(rng)))()
             for _ in range(rng.randint(2, 3))]
    out = parts[0]
    for p in parts[1:]:
        out = out.after(p)
    return out


def contact_family(n: int, seed: int = 0) -> list[PolyMapPair]:
    """n maps; the first few cover each kind deterministically."""
    rng = random.Random(seed)
    fixed = [
        PolyMapPair.identity(),
        translation_map(random_point(rng), "left"),
        random_dilation(rng),
        random_automorphism(rng),
    ]
    out = fixed[:n]
    while len(out) < n:
        out.append(random_contact_map(rng))
    return out


def random_poly(rng: random.Random, max_degree: int = 3, terms: int = 6) -> Poly:
    total = Poly.zero()
    for _ in range(terms):
        exp = [0] * NVARS
        for _ in range(rng.randint(0, max_degree)):
            exp[rng.randrange(NVARS)] += 1
        total = total + monomial(tuple(exp), random_rational(rng))
    return total


def random_poly_map(rng: random.Random, max_degree: int = 3, terms: int = 6) -> PolyMap:
    return PolyMap(tuple(random_poly(rng, max_degree, terms) for _ in range(NVARS)))


def field_flow(field, t: float = 0.1, steps: int = 100):
    """Time-t flow of a polynomial vector field, by fixed-step RK4 in floats.

    Flows of contact fields of positive weight are contact maps whose Pansu
    derivative varies from point to point, so their difference quotients have
    a genuine O(r) truncation error (unlike translations and dilations).
    """
    import numpy as np

    coeffs = field.to_vector_field().coeffs if hasattr(field, "to_vector_field") else field.coeffs
    terms = [[(float(c), e) for e, c in comp.items()] for comp in coeffs]

    def rhs(x):
        out = np.zeros(NVARS)
        for i, comp in enumerate(terms):
            for c, e in comp:
                m = c
                for xi, k in zip(x, e):
                    if k:
                        m *= xi**k
                out[i] += m
        return out

    h = t / steps

    def flow(p):
        x = np.array(p, dtype=float)
        for _ in range(steps):
            k1 = rhs(x)
            k2 = rhs(x + h / 2 * k1)
            k3 = rhs(x + h / 2 * k2)
            k4 = rhs(x + h * k3)
            x = x + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        return tuple(x)

    return flow
