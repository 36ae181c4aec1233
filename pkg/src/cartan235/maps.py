"""Polynomial self-maps of R^5 and certified inverse pairs."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .poly import NVARS, Poly, to_fraction, variables


class NotInvertibleError(ValueError):
    """A claimed polynomial inverse fails the composition certificate."""


@dataclass(frozen=True)
class PolyMap:
    """Five polynomial components f1..f5 in the coordinates (x1, x2, y, z1, z2)."""

    components: tuple[Poly, ...]

    def __post_init__(self):
        comps = tuple(self.components)
        if len(comps) != NVARS:
            raise ValueError(f"a map needs {NVARS} components, got {len(comps)}")
        comps = tuple(c if isinstance(c, Poly) else Poly.const(c) for c in comps)
        for c in comps:
            if c.nvars != NVARS:
                raise ValueError("map components must be polynomials in the 5 coordinates")
        object.__setattr__(self, "components", comps)

    @classmethod
    def identity(cls) -> "PolyMap":
        return cls(variables())

    def __getitem__(self, i: int) -> Poly:
        return self.components[i]

    def __iter__(self):
        return iter(self.components)

    def after(self, inner: "PolyMap") -> "PolyMap":
        """The composite self ∘ inner."""
        return PolyMap(tuple(c.compose(inner.components) for c in self.components))

    def __call__(self, point: Sequence):
        return tuple(c.eval(point) for c in self.components)

    def jacobian(self) -> list[list[Poly]]:
        """Rows are components, columns are coordinate derivatives."""
        return [[c.partial(k) for k in range(NVARS)] for c in self.components]

    def is_identity(self) -> bool:
        return self.components == variables()

    def to_json(self) -> list:
        return [c.to_json() for c in self.components]

    @classmethod
    def from_json(cls, data) -> "PolyMap":
        if not isinstance(data, list) or len(data) != NVARS:
            raise ValueError(f"a map must be a list of {NVARS} polynomials")
        return cls(tuple(Poly.from_json(p) for p in data))


@dataclass(frozen=True)
class PolyMapPair:
    """A polynomial map with a polynomial inverse, certified on construction.

    Both f∘g and g∘f are expanded and compared to the identity exactly.
    """

    f: PolyMap
    g: PolyMap

    def __post_init__(self):
        if not self.f.after(self.g).is_identity():
            raise NotInvertibleError("f ∘ g is not the identity")
        if not self.g.after(self.f).is_identity():
            raise NotInvertibleError("g ∘ f is not the identity")

    @property
    def certified(self) -> bool:
        return True

    def inverse(self) -> "PolyMapPair":
        return PolyMapPair(self.g, self.f)

    def after(self, inner: "PolyMapPair") -> "PolyMapPair":
        """The pair for self.f ∘ inner.f, with inverse inner.g ∘ self.g."""
        return PolyMapPair(self.f.after(inner.f), inner.g.after(self.g))

    @classmethod
    def identity(cls) -> "PolyMapPair":
        return cls(PolyMap.identity(), PolyMap.identity())

    def to_json(self) -> dict:
        return {"components": self.f.to_json(), "inverse": self.g.to_json()}


def load_map_file(path) -> tuple[PolyMap, PolyMap | None]:
    """Read ``{"components": [...], "inverse": [...]}``; the inverse is optional."""
    path = Path(path)
    data = json.loads(Path(path).read_text())
    return parse_map_document(data)


def parse_map_document(data) -> tuple[PolyMap, PolyMap | None]:
    if not isinstance(data, dict) or "components" not in data:
        raise ValueError("map document must be an object with a 'components' list")
    f = PolyMap.from_json(data["components"])
    g = PolyMap.from_json(data["inverse"]) if data.get("inverse") is not None else None
    return f, g


def parse_point(text: str, exact: bool = True) -> tuple:
    """Parse ``"1,0,1/2,0,-1/12"`` into a 5-tuple of Fractions (or floats)."""
    parts = [p.strip() for p in text.replace("−", "-").split(",")]
    if len(parts) != NVARS:
        raise ValueError(f"a point needs {NVARS} comma-separated coordinates, got {len(parts)}")
    if exact:
        return tuple(to_fraction(p) for p in parts)
    return tuple(float(to_fraction(p)) if "/" in p else float(p) for p in parts)
