"""Invariant frames, coframes and polynomial vector fields on the Cartan group.

The left-invariant frame X1, X2, Y, Z1, Z2 (alias Y1..Y5) is obtained by
differentiating left translation at the identity; nothing here is
transcribed by hand.  The coframe theta1..theta5 is the pointwise inverse of
the frame matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .group import group_mul
from .maps import PolyMap, PolyMapPair
from .poly import NVARS, Poly, variables

FRAME_NAMES = ("X1", "X2", "Y", "Z1", "Z2")
COFRAME_NAMES = ("eta1", "eta2", "theta", "iota1", "iota2")


def _as_polys(coeffs) -> tuple[Poly, ...]:
    out = tuple(c if isinstance(c, Poly) else Poly.const(c) for c in coeffs)
    if len(out) != NVARS:
        raise ValueError(f"expected {NVARS} coefficients, got {len(out)}")
    return out


@dataclass(frozen=True)
class VectorField:
    """A polynomial vector field, stored in the coordinate frame ∂1..∂5."""

    coeffs: tuple[Poly, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _as_polys(self.coeffs))

    @classmethod
    def zero(cls) -> "VectorField":
        return cls((Poly.zero(),) * NVARS)

    @classmethod
    def coordinate(cls, i: int) -> "VectorField":
        return cls(tuple(Poly.one() if k == i else Poly.zero() for k in range(NVARS)))

    @classmethod
    def from_invariant(cls, coeffs: Sequence, frame: Sequence["VectorField"] | None = None) -> "VectorField":
        """Σ coeffs[j] · frame[j]; the left-invariant frame by default."""
        frame = left_frame() if frame is None else frame
        out = VectorField.zero()
        for a, V in zip(_as_polys(coeffs), frame):
            if a:
                out = out + V.times(a)
        return out

    def __call__(self, p: Poly) -> Poly:
        """Apply as a derivation: Σ v_i ∂_i p."""
        total = Poly.zero(p.nvars)
        for i, v in enumerate(self.coeffs):
            if v:
                d = p.partial(i)
                if d:
                    total = total + v * d
        return total

    def __add__(self, other: "VectorField") -> "VectorField":
        return VectorField(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "VectorField") -> "VectorField":
        return VectorField(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "VectorField":
        return VectorField(tuple(-a for a in self.coeffs))

    def times(self, f) -> "VectorField":
        return VectorField(tuple(f * a for a in self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def at_origin(self) -> tuple:
        return tuple(c.eval((0,) * NVARS) for c in self.coeffs)

    def invariant_coeffs(self) -> tuple[Poly, ...]:
        """Coefficients in the left-invariant frame: a_j = <theta_j, V>."""
        return tuple(pair(omega, self) for omega in coframe())

    def __str__(self) -> str:
        names = ("∂x1", "∂x2", "∂y", "∂z1", "∂z2")
        parts = [f"({c})·{n}" for c, n in zip(self.coeffs, names) if c]
        return " + ".join(parts) or "0"

    def to_json(self, frame: str = "coordinate") -> dict:
        if frame == "coordinate":
            coeffs = self.coeffs
        elif frame == "invariant":
            coeffs = self.invariant_coeffs()
        else:
            raise ValueError("frame must be 'coordinate' or 'invariant'")
        return {"frame": frame, "coeffs": [c.to_json() for c in coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> "VectorField":
        coeffs = tuple(Poly.from_json(c) for c in data["coeffs"])
        if data.get("frame", "coordinate") == "invariant":
            return cls.from_invariant(coeffs)
        return cls(coeffs)


@dataclass(frozen=True)
class OneForm:
    """A polynomial 1-form Σ w_i dx_i."""

    coeffs: tuple[Poly, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _as_polys(self.coeffs))

    @classmethod
    def coordinate(cls, i: int) -> "OneForm":
        return cls(tuple(Poly.one() if k == i else Poly.zero() for k in range(NVARS)))

    def __add__(self, other: "OneForm") -> "OneForm":
        return OneForm(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "OneForm") -> "OneForm":
        return OneForm(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __str__(self) -> str:
        names = ("dx1", "dx2", "dy", "dz1", "dz2")
        parts = [f"({c})·{n}" for c, n in zip(self.coeffs, names) if c]
        return " + ".join(parts) or "0"

    def to_json(self) -> dict:
        return {"frame": "coordinate", "coeffs": [c.to_json() for c in self.coeffs]}


def bracket(V: VectorField, W: VectorField) -> VectorField:
    """[V, W] = V(W) − W(V), coefficientwise."""
    return VectorField(tuple(V(w) - W(v) for v, w in zip(V.coeffs, W.coeffs)))


def pair(omega: OneForm, V: VectorField) -> Poly:
    total = Poly.zero()
    for w, v in zip(omega.coeffs, V.coeffs):
        if w and v:
            total = total + w * v
    return total


def build_frame(side: str = "left") -> tuple[VectorField, ...]:
    """Y_j|_p = D_0 L_p(∂_j) for side='left'; the right-translation analogue otherwise."""
    if side == "left":
        return left_frame()
    if side == "right":
        return right_frame()
    raise ValueError(f"side must be 'left' or 'right', not {side!r}")


def _differentiate_translation(side: str) -> tuple[VectorField, ...]:
    gens = variables(2 * NVARS)
    p, q = gens[:NVARS], gens[NVARS:]
    prod = group_mul(p, q) if side == "left" else group_mul(q, p)
    zero_q = list(variables()) + [Poly.zero()] * NVARS
    fields = []
    for j in range(NVARS):
        coeffs = tuple(P.partial(NVARS + j).compose(zero_q) for P in prod)
        fields.append(VectorField(coeffs))
    return tuple(fields)


@lru_cache(maxsize=None)
def left_frame() -> tuple[VectorField, ...]:
    return _differentiate_translation("left")


@lru_cache(maxsize=None)
def right_frame() -> tuple[VectorField, ...]:
    return _differentiate_translation("right")


@lru_cache(maxsize=None)
def coframe() -> tuple[OneForm, ...]:
    """The 1-forms dual to the left-invariant frame, by inverting its matrix.

    The frame matrix M (column j = coordinates of Y_j) is unipotent, so
    M⁻¹ = Σ_k (I − M)^k terminates.
    """
    frame = left_frame()
    n = NVARS
    M = [[frame[j].coeffs[i] for j in range(n)] for i in range(n)]
    N = [[(Poly.one() if i == j else Poly.zero()) - M[i][j] for j in range(n)] for i in range(n)]

    def mul(A, B):
        return [[sum((A[i][k] * B[k][j] for k in range(n)), Poly.zero()) for j in range(n)]
                for i in range(n)]

    inv = [[Poly.one() if i == j else Poly.zero() for j in range(n)] for i in range(n)]
    power = inv
    for _ in range(n):
        power = mul(power, N)
        inv = [[inv[i][j] + power[i][j] for j in range(n)] for i in range(n)]
    if any(c for row in mul(power, N) for c in row):
        raise ArithmeticError("frame matrix is not unipotent")
    return tuple(OneForm(tuple(inv[i])) for i in range(n))


def certify_duality() -> list[tuple[int, int, Poly]]:
    """All (i, j, residual) with <theta_i, Y_j> − δ_ij nonzero."""
    bad = []
    for i, omega in enumerate(coframe()):
        for j, V in enumerate(left_frame()):
            r = pair(omega, V) - (1 if i == j else 0)
            if r:
                bad.append((i, j, r))
    return bad


def pullback(fg: PolyMapPair | PolyMap, omega: OneForm) -> OneForm:
    """f*ω = Σ_i (ω_i ∘ f) df_i."""
    f = fg.f if isinstance(fg, PolyMapPair) else fg
    comps = f.components
    jac = f.jacobian()
    out = [Poly.zero()] * NVARS
    for i, w in enumerate(omega.coeffs):
        if not w:
            continue
        wf = w.compose(comps)
        for k in range(NVARS):
            if jac[i][k]:
                out[k] = out[k] + wf * jac[i][k]
    return OneForm(tuple(out))


def pushforward(fg: PolyMapPair, V: VectorField) -> VectorField:
    """f_*V = (Df · V) ∘ g, defined only for certified inverse pairs."""
    if not isinstance(fg, PolyMapPair):
        raise TypeError("pushforward needs a certified PolyMapPair")
    g = fg.g.components
    out = []
    for row in fg.f.jacobian():
        s = Poly.zero()
        for d, v in zip(row, V.coeffs):
            if d and v:
                s = s + d * v
        out.append(s.compose(g))
    return VectorField(tuple(out))


def sublaplacian(p: Poly) -> Poly:
    X1, X2 = left_frame()[:2]
    return X1(X1(p)) + X2(X2(p))


def apply_frame(j: int, p: Poly) -> Poly:
    """Y_j p for j = 0..4 (X1, X2, Y, Z1, Z2)."""
    return left_frame()[j](p)


def certify_brackets() -> list[tuple[int, int, VectorField]]:
    """(i, j, residual) where [Y_i, Y_j] differs from the Cartan bracket table."""
    from .algebra import cartan_algebra

    alg = cartan_algebra()
    frame = left_frame()
    bad = []
    for i in range(NVARS):
        for j in range(i + 1, NVARS):
            expected = VectorField.zero()
            for k, c in enumerate(alg.basis_bracket(i, j)):
                if c:
                    expected = expected + frame[k].times(Poly.const(c))
            r = bracket(frame[i], frame[j]) - expected
            if not r.is_zero():
                bad.append((i, j, r))
    return bad


def certify_frames_commute() -> list[tuple[int, int, VectorField]]:
    """Left- and right-invariant fields commute; returns the offending pairs."""
    bad = []
    for i, L in enumerate(left_frame()):
        for j, R in enumerate(right_frame()):
            r = bracket(L, R)
            if not r.is_zero():
                bad.append((i, j, r))
    return bad


# -- hand transcriptions, kept separate from the derived objects above --------

def reference_frame() -> tuple[VectorField, ...]:
    """X1, X2, Y, Z1, Z2 written out by hand in coordinates."""
    x1, x2, y, z1, z2 = variables()
    h, s, t = Fraction(1, 2), Fraction(1, 6), Fraction(1, 12)
    o, z = Poly.one(), Poly.zero()
    return (
        VectorField((o, z, -x2 * h, -(y + x1 * x2 * s) * h, -(x2 * x2) * t)),
        VectorField((z, o, x1 * h, (x1 * x1) * t, -(y - x1 * x2 * s) * h)),
        VectorField((z, z, o, x1 * h, x2 * h)),
        VectorField((z, z, z, o, z)),
        VectorField((z, z, z, z, o)),
    )


def reference_coframe(dy_sign_iota1: int = -1) -> tuple[OneForm, ...]:
    """eta1, eta2, theta, iota1, iota2 written out by hand.

    The dy coefficient of iota1 is -x1/2; the variant with +x1/2, a common
    transcription, is available through ``dy_sign_iota1=+1`` and fails duality.
    """
    x1, x2, y, z1, z2 = variables()
    h, s = Fraction(1, 2), Fraction(1, 6)
    o, z = Poly.one(), Poly.zero()
    return (
        OneForm((o, z, z, z, z)),
        OneForm((z, o, z, z, z)),
        OneForm((x2 * h, -x1 * h, o, z, z)),
        OneForm((y * h - x1 * x2 * s, (x1 * x1) * s, x1 * (h * dy_sign_iota1), o, z)),
        OneForm((-(x2 * x2) * s, y * h + x1 * x2 * s, -x2 * h, z, o)),
    )


def certify_reference_frame() -> list[int]:
    return [j for j, (a, b) in enumerate(zip(left_frame(), reference_frame())) if a != b]


def certify_reference_coframe() -> list[int]:
    return [i for i, (a, b) in enumerate(zip(coframe(), reference_coframe())) if a != b]
