"""Exact symbolic and numeric computations on the Cartan group (the flat (2,3,5) model)."""

__version__ = "0.1.0"

from .algebra import StratifiedAlgebra, cartan_algebra
from .group import dilate, group_inv, group_mul
from .maps import PolyMap, PolyMapPair
from .poly import Poly

__all__ = [
    "Poly", "PolyMap", "PolyMapPair", "StratifiedAlgebra", "cartan_algebra",
    "group_mul", "group_inv", "dilate",
]
