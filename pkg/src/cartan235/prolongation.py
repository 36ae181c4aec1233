"""Tanaka prolongation of a stratified Lie algebra.

Write g_{-i} for layer i of the algebra.  Level k ≥ 0 consists of the linear
maps u of degree k, sending g_{-i} into g_{k-i} (itself a previous level
when k - i ≥ 0), such that

    u([x, y]) = [u(x), y] + [x, u(y)]    for all x, y in the negative part,

where an element A of a level acts on the negative part as the map it is.
Each level is the kernel of an exact linear system in the coefficients of u.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebra import StratifiedAlgebra
from .linalg import nullspace, rank


@dataclass
class ProlongationLevel:
    """Basis of one level as maps on the negative part.

    ``basis[b][x]`` is the image of basis vector x: a coefficient vector over
    the algebra's basis when the image is negative, or over level
    ``k - weight(x)``'s basis otherwise.
    """

    k: int
    basis: list[list[list[Fraction]]]

    @property
    def dim(self) -> int:
        return len(self.basis)


@dataclass
class Prolongation:
    algebra: StratifiedAlgebra
    levels: list[ProlongationLevel] = field(default_factory=list)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(lv.dim for lv in self.levels)

    @property
    def total_dim(self) -> int:
        return self.algebra.dim + sum(self.dims)

    # -- the action of level elements on the negative part ------------------

    def act(self, level: int, coeffs: Sequence[Fraction], x: int) -> tuple[str, list[Fraction]]:
        """Image of basis vector x under Σ coeffs[b] · basis_b of ``level``.

        Returns ("neg", vector over the algebra) or ("lvl", vector over the
        basis of the target level).
        """
        k = level - self.algebra.weights[x]
        if k < 0:
            size, kind = self.algebra.dim, "neg"
        else:
            size, kind = self.levels[k].dim, "lvl"
        out = [Fraction(0)] * size
        for c, u in zip(coeffs, self.levels[level].basis):
            if c:
                img = u[x]
                for i, v in enumerate(img):
                    if v:
                        out[i] += c * v
        return kind, out


def _image_slots(A: StratifiedAlgebra, levels: list[ProlongationLevel], deg: int) -> list[int]:
    """Coordinates an image of degree ``deg`` may use."""
    return A.layer(-deg) if deg < 0 else list(range(levels[deg].dim))


def _compute_level(P: Prolongation, k: int) -> ProlongationLevel:
    A = P.algebra
    n = A.dim
    levels = P.levels

    def img_deg(x: int) -> int:
        return k - A.weights[x]

    # unknown block for each basis vector x: the coefficients of u(x)
    slots = [_image_slots(A, levels, img_deg(x)) for x in range(n)]
    col = {}
    for x in range(n):
        for t in slots[x]:
            col[(x, t)] = len(col)

    rows: dict[tuple, dict[int, Fraction]] = {}

    def add(key, c, val):
        row = rows.setdefault(key, {})
        s = row.get(c, Fraction(0)) + val
        if s:
            row[c] = s
        else:
            row.pop(c, None)

    for x, y in itertools.combinations(range(n), 2):
        # equation components: key (x, y, coordinate of the degree k-w(x)-w(y) space)
        for z, cz in enumerate(A.basis_bracket(x, y)):
            if cz:
                for t in slots[z]:
                    add((x, y, t), col[(z, t)], cz)
        # − [u(x), y] − [x, u(y)] = − [u(x), y] + [u(y), x]
        for src, other, sign in ((x, y, -1), (y, x, 1)):
            if img_deg(src) < 0:
                for t in slots[src]:
                    for comp, v in enumerate(A.basis_bracket(t, other)):
                        if v:
                            add((x, y, comp), col[(src, t)], sign * v)
            else:
                for b, B in enumerate(levels[img_deg(src)].basis):
                    for comp, v in enumerate(B[other]):
                        if v:
                            add((x, y, comp), col[(src, b)], sign * v)
    kernel = nullspace([r for r in rows.values() if r], len(col))
    basis = []
    for vec in kernel:
        maps = []
        for x in range(n):
            if img_deg(x) < 0:
                full = [Fraction(0)] * n
                for t in slots[x]:
                    full[t] = vec[col[(x, t)]]
            else:
                full = [vec[col[(x, t)]] for t in slots[x]]
            maps.append(full)
        basis.append(maps)
    return ProlongationLevel(k, basis)


def prolong(A: StratifiedAlgebra, max_level: int) -> Prolongation:
    """Levels 0..max_level of the Tanaka prolongation, exactly."""
    if max_level < 0:
        raise ValueError("max_level must be non-negative")
    A.validate()
    P = Prolongation(A)
    for k in range(max_level + 1):
        P.levels.append(_compute_level(P, k))
    return P


def level_dimensions(A: StratifiedAlgebra, max_level: int) -> tuple[int, ...]:
    return prolong(A, max_level).dims


@dataclass
class RigidityReport:
    verdict: str  # "rigid" or "undetermined"
    dims: tuple[int, ...]
    first_vanishing_level: int | None
    total_dim: int | None

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "level_dimensions": list(self.dims),
            "first_vanishing_level": self.first_vanishing_level,
            "total_dimension": self.total_dim,
        }


def rigidity_report(A: StratifiedAlgebra, max_level: int) -> RigidityReport:
    """Rigid once some level vanishes and the level after it vanishes too.

    When the first zero level is the last one requested, one extra level is
    computed to confirm.
    """
    P = prolong(A, max_level)
    dims = P.dims
    for k, d in enumerate(dims):
        if d == 0:
            if k + 1 >= len(dims):
                P.levels.append(_compute_level(P, k + 1))
            if P.levels[k + 1].dim == 0:
                return RigidityReport("rigid", dims, k, A.dim + sum(dims))
            break
    return RigidityReport("undetermined", dims, None, None)


# -- consistency checks used by the test-suite and the CLI -------------------

def grading_derivation(A: StratifiedAlgebra) -> list[list[Fraction]]:
    """x ↦ -i·x on layer i (the degree-0 grading element, in the g_{-i} convention)."""
    return [[Fraction(-A.weights[x]) if t == x else Fraction(0) for t in range(A.dim)]
            for x in range(A.dim)]


def derivation_residual(A: StratifiedAlgebra, u: list[list[Fraction]]) -> list[tuple[int, int]]:
    """Pairs where a degree-0 map fails u([x,y]) = [u x, y] + [x, u y]."""
    bad = []
    for x, y in itertools.combinations(range(A.dim), 2):
        lhs = [Fraction(0)] * A.dim
        for z, c in enumerate(A.basis_bracket(x, y)):
            if c:
                lhs = [a + c * b for a, b in zip(lhs, u[z])]
        rhs = [a + b for a, b in zip(A.bracket(u[x], A.unit(y)), A.bracket(A.unit(x), u[y]))]
        if lhs != rhs:
            bad.append((x, y))
    return bad


def faithful(P: Prolongation) -> bool:
    """No nonzero element of any level annihilates layer 1."""
    first = P.algebra.layer(1)
    for lv in P.levels:
        if not lv.basis:
            continue
        # columns = basis elements, rows = all coefficients of the images of layer 1
        rows = []
        for x in first:
            size = len(lv.basis[0][x])
            for t in range(size):
                rows.append([B[x][t] for B in lv.basis])
        if rank(rows, lv.dim) != lv.dim:
            return False
    return True
