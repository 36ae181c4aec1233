"""Contact vector fields on the Cartan group and their finite symmetry algebra.

A field is written Υ = a11 X1 + a12 X2 + a2 Y + a31 Z1 + a32 Z2 in the
left-invariant frame.  It is contact when [Υ, X1] and [Υ, X2] are horizontal,
which amounts to first-order equations X_k a_{layer i} = (linear in a_{layer i-1})
read off from the structure constants.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .algebra import cartan_algebra
from .frames import VectorField, bracket, left_frame
from .linalg import det, nullspace_with_free, rank
from .maps import PolyMapPair
from .pansu import check_contact, horizontal_jacobian
from .poly import NVARS, WEIGHTS, Poly, monomial, monomials_of_weight

COEFF_NAMES = ("a11", "a12", "a2", "a31", "a32")


class NotContactError(ValueError):
    """The map handed to build_induced_field is not certified contact."""


@dataclass(frozen=True)
class ContactField:
    """Invariant-frame coefficients (a11, a12, a2, a31, a32) of a vector field."""

    coeffs: tuple[Poly, ...]

    def __post_init__(self):
        cs = tuple(c if isinstance(c, Poly) else Poly.const(c) for c in self.coeffs)
        if len(cs) != NVARS:
            raise ValueError("a contact field candidate has five coefficients")
        object.__setattr__(self, "coeffs", cs)

    @classmethod
    def of(cls, a11=0, a12=0, a2=0, a31=0, a32=0) -> "ContactField":
        return cls((a11, a12, a2, a31, a32))

    @classmethod
    def from_vector_field(cls, V: VectorField) -> "ContactField":
        return cls(V.invariant_coeffs())

    def to_vector_field(self) -> VectorField:
        return VectorField.from_invariant(self.coeffs)

    def __add__(self, other: "ContactField") -> "ContactField":
        return ContactField(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "ContactField") -> "ContactField":
        return ContactField(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def scale(self, c) -> "ContactField":
        return ContactField(tuple(a.scale(c) for a in self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def weight(self) -> int | None:
        """Dilation weight: wdeg(a_i) − weight(Y_i), if homogeneous."""
        ws = set()
        for c, w in zip(self.coeffs, WEIGHTS):
            for e, _ in c.items():
                ws.add(sum(k * v for k, v in zip(e, WEIGHTS)) - w)
        return ws.pop() if len(ws) == 1 else None

    def __str__(self) -> str:
        names = ("X1", "X2", "Y", "Z1", "Z2")
        parts = [f"({c})·{n}" for c, n in zip(self.coeffs, names) if c]
        return " + ".join(parts) or "0"

    def to_json(self) -> dict:
        return {"frame": "invariant", "coeffs": [c.to_json() for c in self.coeffs]}


@dataclass(frozen=True)
class Condition:
    """X_k a_target = Σ sources[m] · a_m (indices into the five coefficients)."""

    k: int
    target: int
    sources: tuple[tuple[int, Fraction], ...]

    def label(self) -> str:
        gen = ("X1", "X2")[self.k]
        rhs = " + ".join(
            (f"{c}*" if c not in (1, -1) else ("-" if c == -1 else "")) + COEFF_NAMES[m]
            for m, c in self.sources) or "0"
        return f"{gen} {COEFF_NAMES[self.target]} = {rhs}"


@lru_cache(maxsize=None)
def contact_conditions() -> tuple[Condition, ...]:
    """The equations X_k a_{i,j} = Q_{i,j,k}(a_{i-1,·}) for the Cartan algebra.

    Q comes from Σ_m a_m [Y_m, X_k] = Σ_j Q_{j,k} Y_j over the previous layer.
    """
    alg = cartan_algebra()
    out = []
    for layer in range(2, alg.step + 1):
        prev, cur = alg.layer(layer - 1), alg.layer(layer)
        for j in cur:
            for k in alg.layer(1):
                sources = tuple(
                    (m, alg.basis_bracket(m, k)[j]) for m in prev if alg.basis_bracket(m, k)[j])
                out.append(Condition(k, j, sources))
    # X1 before X2 within each layer, as the equations are usually listed
    return tuple(sorted(out, key=lambda c: (WEIGHTS[c.target], c.k, c.target)))


def condition_residual(cond: Condition, coeffs) -> Poly:
    X = left_frame()[cond.k]
    r = X(coeffs[cond.target])
    for m, c in cond.sources:
        r = r - coeffs[m].scale(c)
    return r


@dataclass
class ContactFieldReport:
    passed: bool
    condition: str | None = None
    residual: Poly | None = None

    def to_json(self) -> dict:
        return {
            "status": "pass" if self.passed else "fail",
            "condition": self.condition,
            "residual": self.residual.to_json() if self.residual is not None else None,
        }


def is_contact_field(field_: ContactField) -> ContactFieldReport:
    for cond in contact_conditions():
        r = condition_residual(cond, field_.coeffs)
        if r:
            return ContactFieldReport(False, cond.label(), r)
    return ContactFieldReport(True)


def is_contact_by_brackets(field_: ContactField) -> bool:
    """Independent check: [Υ, X1] and [Υ, X2] have no Y, Z1, Z2 components."""
    V = field_.to_vector_field()
    for X in left_frame()[:2]:
        inv = bracket(V, X).invariant_coeffs()
        if any(inv[2:]):
            return False
    return True


def bracket_contact(U: ContactField, W: ContactField) -> ContactField:
    return ContactField.from_vector_field(bracket(U.to_vector_field(), W.to_vector_field()))


def build_induced_field(fg: PolyMapPair, direction) -> ContactField:
    """The contact field induced on the image of a contact map.

    With α = (J_H f ∘ g)(X_d f1 ∘ g) and β = (J_H f ∘ g)(X_d f2 ∘ g):
    Υ = −(X2X1α) X1 + (X1X2β) X2 − (X1α) Y + α Z1 + β Z2.
    """
    d = {"X1": 0, "X2": 1, 1: 0, 2: 1}.get(direction)
    if d is None:
        raise ValueError(f"direction must be X1 or X2, not {direction!r}")
    report = check_contact(fg)
    if not report.passed:
        raise NotContactError(
            f"map is not contact: entry {report.witness} has residual {report.residual}")
    f, g = fg.f, fg.g.components
    X1, X2 = left_frame()[:2]
    Xd = (X1, X2)[d]
    jh_g = horizontal_jacobian(f).compose(g)
    alpha = jh_g * Xd(f[0]).compose(g)
    beta = jh_g * Xd(f[1]).compose(g)
    return ContactField.of(
        a11=-X2(X1(alpha)),
        a12=X1(X2(beta)),
        a2=-X1(alpha),
        a31=alpha,
        a32=beta,
    )


# -- solving for all polynomial contact fields -------------------------------

UNKNOWN_SLOTS = (2, 3, 4)  # a2, a31, a32; a11 and a12 follow from a2


@dataclass
class WeightBlock:
    weight: int
    columns: list[tuple[int, tuple]]
    basis: list[list[Fraction]]
    pivots_free: list[int]


def _layer1_from_a2(a2: Poly) -> tuple[Poly, Poly]:
    """Solve the layer-2 equations X_k a2 = c·a_m for a11, a12."""
    out = [Poly.zero(), Poly.zero()]
    for cond in contact_conditions():
        if cond.target != 2:
            continue
        ((m, c),) = cond.sources
        out[m] = left_frame()[cond.k](a2).scale(Fraction(1) / c)
    return out[0], out[1]


def _field_from_vector(columns, vec) -> ContactField:
    parts = {s: {} for s in UNKNOWN_SLOTS}
    for (slot, exp), c in zip(columns, vec):
        if c:
            parts[slot][exp] = c
    a2, a31, a32 = (Poly(parts[s]) for s in UNKNOWN_SLOTS)
    a11, a12 = _layer1_from_a2(a2)
    return ContactField((a11, a12, a2, a31, a32))


def _solve_block(weight: int, max_wdeg: int) -> WeightBlock:
    columns = []
    for slot in UNKNOWN_SLOTS:
        wdeg = weight + WEIGHTS[slot]
        if 0 <= wdeg <= max_wdeg:
            columns.extend((slot, e) for e in monomials_of_weight(wdeg))
    rows: dict[tuple, dict[int, Fraction]] = {}
    for col, (slot, exp) in enumerate(columns):
        mono = monomial(exp)
        for ci, cond in enumerate(contact_conditions()):
            if cond.target == 2:
                continue  # defines a11, a12
            contrib = Poly.zero()
            if cond.target == slot:
                contrib = contrib + left_frame()[cond.k](mono)
            for m, c in cond.sources:
                if m == slot:
                    contrib = contrib - mono.scale(c)
            for e, v in contrib.items():
                row = rows.setdefault((ci, e), {})
                row[col] = row.get(col, Fraction(0)) + v
    basis, free = nullspace_with_free(list(rows.values()), len(columns))
    return WeightBlock(weight, columns, basis, free)


@dataclass
class SymmetryAlgebra:
    max_wdeg: int
    basis: list[ContactField]
    weights: list[int]
    structure: dict[tuple[int, int], list[Fraction]] = field(default_factory=dict)
    closure_failures: list[tuple[int, int]] = field(default_factory=list)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def grading(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for w in self.weights:
            out[w] = out.get(w, 0) + 1
        return dict(sorted(out.items()))

    def bracket_vector(self, i: int, j: int) -> list[Fraction]:
        if i == j:
            return [Fraction(0)] * self.dim
        if i < j:
            return self.structure.get((i, j), [Fraction(0)] * self.dim)
        return [-c for c in self.structure.get((j, i), [Fraction(0)] * self.dim)]

    def to_json(self) -> dict:
        return {
            "max_weighted_degree": self.max_wdeg,
            "dimension": self.dim,
            "grading": {str(k): v for k, v in self.grading().items()},
            "basis": [dict(f.to_json(), weight=w) for f, w in zip(self.basis, self.weights)],
            "structure_constants": [
                {"i": i, "j": j, "coefficients": [_fmt(c) for c in v]}
                for (i, j), v in sorted(self.structure.items()) if any(v)
            ],
        }


def _fmt(c: Fraction) -> str:
    return f"{c.numerator}/{c.denominator}"


def solve_symmetries(max_weighted_degree: int, structure: bool = True) -> SymmetryAlgebra:
    """All contact fields whose coefficients a2, a31, a32 have weighted degree ≤ N.

    The linear system splits by dilation weight; each block is solved by
    exact elimination and its nullspace in canonical echelon form gives the
    basis.  With ``structure`` the bracket table is computed in that basis.
    """
    if max_weighted_degree < 0:
        raise ValueError("max_weighted_degree must be non-negative")
    lowest = -max(WEIGHTS)
    blocks = [_solve_block(w, max_weighted_degree)
              for w in range(lowest, max_weighted_degree - min(WEIGHTS[2:]) + 1)]
    basis, weights = [], []
    index: dict[int, list[int]] = {}
    for blk in blocks:
        for vec in blk.basis:
            index.setdefault(blk.weight, []).append(len(basis))
            basis.append(_field_from_vector(blk.columns, vec))
            weights.append(blk.weight)
    alg = SymmetryAlgebra(max_weighted_degree, basis, weights)
    if structure:
        by_weight = {blk.weight: blk for blk in blocks}
        _fill_structure(alg, by_weight, index)
    return alg


def _coordinates(fld: ContactField, blk: WeightBlock, members: list[int], alg) -> list[Fraction] | None:
    """Coordinates of a field in the block's basis, or None if outside the span."""
    lookup = {col: i for i, col in enumerate(blk.columns)}
    vec = [Fraction(0)] * len(blk.columns)
    for slot in UNKNOWN_SLOTS:
        for e, c in fld.coeffs[slot].items():
            i = lookup.get((slot, e))
            if i is None:
                return None
            vec[i] = c
    coords = [vec[f] for f in blk.pivots_free]
    rebuilt = ContactField.of()
    for c, m in zip(coords, members):
        if c:
            rebuilt = rebuilt + alg.basis[m].scale(c)
    return coords if (rebuilt - fld).is_zero() else None


def _fill_structure(alg: SymmetryAlgebra, blocks: dict, index: dict) -> None:
    vfields = [f.to_vector_field() for f in alg.basis]
    for i, j in itertools.combinations(range(alg.dim), 2):
        br = ContactField.from_vector_field(bracket(vfields[i], vfields[j]))
        vec = [Fraction(0)] * alg.dim
        if br.is_zero():
            alg.structure[(i, j)] = vec
            continue
        w = alg.weights[i] + alg.weights[j]
        members = index.get(w, [])
        coords = _coordinates(br, blocks[w], members, alg) if w in blocks else None
        if coords is None:
            alg.closure_failures.append((i, j))
            continue
        for c, m in zip(coords, members):
            vec[m] = c
        alg.structure[(i, j)] = vec


@dataclass
class Diagnostics:
    dimension: int
    grading: dict[int, int]
    closed: bool
    antisymmetric: bool
    jacobi_failures: int
    center_dim: int
    killing_det: Fraction
    all_contact: bool

    @property
    def semisimple(self) -> bool:
        return self.killing_det != 0

    @property
    def ok(self) -> bool:
        return (self.closed and self.antisymmetric and not self.jacobi_failures
                and self.center_dim == 0 and self.semisimple and self.all_contact)

    def to_json(self) -> dict:
        return {
            "dimension": self.dimension,
            "grading": {str(k): v for k, v in self.grading.items()},
            "closed_under_bracket": self.closed,
            "antisymmetric": self.antisymmetric,
            "jacobi_failures": self.jacobi_failures,
            "center_dimension": self.center_dim,
            "killing_determinant": _fmt(self.killing_det),
            "killing_nondegenerate": self.semisimple,
            "all_basis_fields_contact": self.all_contact,
        }


def ad_matrices(alg: SymmetryAlgebra) -> list[list[list[Fraction]]]:
    n = alg.dim
    mats = []
    for i in range(n):
        cols = [alg.bracket_vector(i, j) for j in range(n)]
        mats.append([[cols[j][k] for j in range(n)] for k in range(n)])
    return mats


def killing_form(alg: SymmetryAlgebra) -> list[list[Fraction]]:
    ads = ad_matrices(alg)
    n = alg.dim
    return [[sum((ads[a][r][s] * ads[b][s][r] for r in range(n) for s in range(n)), Fraction(0))
             for b in range(n)] for a in range(n)]


def algebra_diagnostics(alg: SymmetryAlgebra, subset: list[int] | None = None) -> Diagnostics:
    """Exact structural checks on the computed bracket table."""
    n = alg.dim
    antisym = all(
        alg.bracket_vector(i, j) == [-c for c in alg.bracket_vector(j, i)]
        for i in range(n) for j in range(n))
    jac = 0
    for i, j, k in itertools.combinations(range(n), 3):
        total = [Fraction(0)] * n
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            inner = alg.bracket_vector(b, c)
            for m, coef in enumerate(inner):
                if coef:
                    outer = alg.bracket_vector(a, m)
                    total = [t + coef * o for t, o in zip(total, outer)]
        if any(total):
            jac += 1
    # center: v with [e_i, v] = 0 for every i
    rows = []
    for i in range(n):
        for k in range(n):
            rows.append([alg.bracket_vector(i, j)[k] for j in range(n)])
    center = n - rank(rows, n)
    kdet = det(killing_form(alg)) if n else Fraction(0)
    contact = all(is_contact_field(f).passed for f in alg.basis)
    return Diagnostics(n, alg.grading(), not alg.closure_failures, antisym, jac, center, kdet, contact)


def subalgebra_is_abelian(alg: SymmetryAlgebra, members: list[int]) -> bool:
    return all(not any(alg.bracket_vector(i, j)) for i in members for j in members)
