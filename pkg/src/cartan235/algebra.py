"""Graded nilpotent Lie algebras given by structure constants."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .linalg import rank
from .poly import to_fraction


class InvalidAlgebraError(ValueError):
    """Structure constants that do not define a valid stratified algebra."""


@dataclass(frozen=True)
class StratifiedAlgebra:
    """A stratified Lie algebra on a graded basis.

    ``weights[i]`` is the layer of basis vector ``i`` (1 for the generating
    layer).  ``table[(i, j)]`` holds the coefficient vector of ``[e_i, e_j]``
    for i < j; missing pairs bracket to zero.
    """

    weights: tuple[int, ...]
    table: dict = field(default_factory=dict)
    name: str = ""

    def __post_init__(self):
        n = len(self.weights)
        clean = {}
        for (i, j), coeffs in self.table.items():
            if not (0 <= i < n and 0 <= j < n):
                raise InvalidAlgebraError(f"bracket index ({i}, {j}) out of range")
            coeffs = tuple(to_fraction(c) for c in coeffs)
            if len(coeffs) != n:
                raise InvalidAlgebraError(f"bracket ({i}, {j}) result must have {n} entries")
            if i == j:
                if any(coeffs):
                    raise InvalidAlgebraError(f"[e{i}, e{i}] must vanish")
                continue
            if i > j:
                i, j, coeffs = j, i, tuple(-c for c in coeffs)
            if (i, j) in clean and clean[(i, j)] != coeffs:
                raise InvalidAlgebraError(f"inconsistent brackets given for pair ({i}, {j})")
            if any(coeffs):
                clean[(i, j)] = coeffs
        object.__setattr__(self, "table", clean)

    @property
    def dim(self) -> int:
        return len(self.weights)

    @property
    def step(self) -> int:
        return max(self.weights, default=0)

    def layer(self, k: int) -> list[int]:
        return [i for i, w in enumerate(self.weights) if w == k]

    @property
    def layer_dims(self) -> tuple[int, ...]:
        return tuple(len(self.layer(k)) for k in range(1, self.step + 1))

    def basis_bracket(self, i: int, j: int) -> tuple[Fraction, ...]:
        if i == j:
            return (Fraction(0),) * self.dim
        if i < j:
            return self.table.get((i, j), (Fraction(0),) * self.dim)
        return tuple(-c for c in self.table.get((j, i), (Fraction(0),) * self.dim))

    def bracket(self, a: Sequence, b: Sequence) -> list:
        """Bracket of coordinate vectors.  Entries may be any ring elements."""
        out = [0] * self.dim
        for (i, j), coeffs in self.table.items():
            ai, aj, bi, bj = a[i], a[j], b[i], b[j]
            # [e_i, e_j] = c  contributes (a_i b_j - a_j b_i) c
            w = ai * bj - aj * bi
            if isinstance(w, (int, Fraction)) and not w:
                continue
            for k, c in enumerate(coeffs):
                if c:
                    out[k] = out[k] + c * w
        return out

    def unit(self, i: int) -> list[Fraction]:
        v = [Fraction(0)] * self.dim
        v[i] = Fraction(1)
        return v

    def ad_matrix(self, i: int) -> list[list[Fraction]]:
        """Matrix of ad(e_i) acting on coordinate vectors (columns = images of e_j)."""
        cols = [self.basis_bracket(i, j) for j in range(self.dim)]
        return [[cols[j][k] for j in range(self.dim)] for k in range(self.dim)]

    # -- validation ---------------------------------------------------------

    def jacobi_violations(self) -> list[tuple[int, int, int]]:
        bad = []
        for i, j, k in itertools.combinations(range(self.dim), 3):
            total = [Fraction(0)] * self.dim
            for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                inner = self.basis_bracket(b, c)
                outer = self.bracket(self.unit(a), inner)
                total = [x + y for x, y in zip(total, outer)]
            if any(total):
                bad.append((i, j, k))
        return bad

    def validate(self) -> None:
        """Raise InvalidAlgebraError unless this is a stratified Lie algebra."""
        if not self.weights:
            raise InvalidAlgebraError("empty algebra")
        if min(self.weights) < 1:
            raise InvalidAlgebraError("weights must be positive integers")
        for k in range(1, self.step + 1):
            if not self.layer(k):
                raise InvalidAlgebraError(f"layer {k} is empty but layer {self.step} is not")
        for (i, j), coeffs in self.table.items():
            w = self.weights[i] + self.weights[j]
            for k, c in enumerate(coeffs):
                if c and self.weights[k] != w:
                    raise InvalidAlgebraError(
                        f"[e{i}, e{j}] has a component on e{k} outside layer {w}")
        bad = self.jacobi_violations()
        if bad:
            raise InvalidAlgebraError(f"Jacobi identity fails for basis triple {bad[0]}")
        first = self.layer(1)
        for k in range(1, self.step):
            images = [self.basis_bracket(a, b) for a in first for b in self.layer(k)]
            target = self.layer(k + 1)
            got = rank(images, self.dim)
            if got != len(target):
                raise InvalidAlgebraError(
                    f"[layer 1, layer {k}] has rank {got}, but layer {k + 1} has dimension {len(target)}")

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "weights": list(self.weights),
            "brackets": [
                {"i": i, "j": j, "result": [format_rational(c) for c in coeffs]}
                for (i, j), coeffs in sorted(self.table.items())
            ],
        }

    @classmethod
    def from_json(cls, data: dict, name: str = "") -> "StratifiedAlgebra":
        try:
            dim = int(data["dim"])
            weights = tuple(int(w) for w in data["weights"])
            brackets = data.get("brackets", [])
            table = {}
            for entry in brackets:
                key = (int(entry["i"]), int(entry["j"]))
                coeffs = [to_fraction(c) for c in entry["result"]]
                if key in table or key[::-1] in table:
                    prev = table.get(key) or [-c for c in table[key[::-1]]]
                    if list(prev) != coeffs:
                        raise InvalidAlgebraError(f"conflicting entries for bracket {key}")
                    continue
                table[key] = coeffs
        except InvalidAlgebraError:
            raise
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as err:
            raise InvalidAlgebraError(f"malformed algebra description: {err}") from err
        if len(weights) != dim:
            raise InvalidAlgebraError(f"'weights' has {len(weights)} entries but dim is {dim}")
        return cls(weights, table, name)

    @classmethod
    def load(cls, path) -> "StratifiedAlgebra":
        path = Path(path)
        try:
            data = json.loads(path.read_text())
        except json.JSONDecodeError as err:
            raise InvalidAlgebraError(f"{path}: not valid JSON ({err})") from err
        return cls.from_json(data, name=path.stem)


def format_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def cartan_algebra() -> StratifiedAlgebra:
    """Basis X1, X2, Y, Z1, Z2 with [X1,X2]=Y, [X1,Y]=Z1, [X2,Y]=Z2."""
    return StratifiedAlgebra(
        (1, 1, 2, 3, 3),
        {(0, 1): (0, 0, 1, 0, 0), (0, 2): (0, 0, 0, 1, 0), (1, 2): (0, 0, 0, 0, 1)},
        name="cartan",
    )


def heisenberg_algebra() -> StratifiedAlgebra:
    return StratifiedAlgebra((1, 1, 2), {(0, 1): (0, 0, 1)}, name="heisenberg")


def abelian_algebra(n: int = 2) -> StratifiedAlgebra:
    return StratifiedAlgebra((1,) * n, {}, name=f"abelian{n}")


BUILTIN_ALGEBRAS = {
    "cartan": cartan_algebra,
    "heisenberg": heisenberg_algebra,
    "abelian": abelian_algebra,
}
