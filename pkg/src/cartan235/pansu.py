"""Pansu derivatives of polynomial maps of the Cartan group.

Indices in the public functions are 1-based, matching the basis
Y1..Y5 = X1, X2, Y, Z1, Z2 and the coframe theta1..theta5.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .frames import apply_frame, coframe, left_frame, pair, pullback
from .group import dilate, group_inv, group_mul
from .maps import PolyMap, PolyMapPair
from .poly import NVARS, Poly

SIXTH = Fraction(1, 6)
HALF = Fraction(1, 2)


class DomainError(ValueError):
    """The map could not be evaluated at a point the estimator needs."""


class NonFiniteError(ArithmeticError):
    """Floating-point evaluation produced inf or nan."""


def _as_map(f) -> PolyMap:
    return f.f if isinstance(f, PolyMapPair) else f


def horizontal_jacobian(f) -> Poly:
    """det [[X1 f1, X2 f1], [X1 f2, X2 f2]]."""
    f = _as_map(f)
    X1, X2 = left_frame()[:2]
    return X1(f[0]) * X2(f[1]) - X2(f[0]) * X1(f[1])


def _row_entry(f: PolyMap, i: int, d: Callable[[Poly], Poly]) -> Poly:
    """Row i (1-based) of the Pansu matrix, with the column derivative ``d``."""
    f1, f2, f3, f4, f5 = f.components
    if i in (1, 2):
        return d(f.components[i - 1])
    if i == 3:
        return d(f3) + HALF * (f2 * d(f1) - f1 * d(f2))
    tw = f2 * d(f1) - f1 * d(f2)
    if i == 4:
        return d(f4) + HALF * (f3 * d(f1) - f1 * d(f3)) - SIXTH * (f1 * tw)
    if i == 5:
        return d(f5) + HALF * (f3 * d(f2) - f2 * d(f3)) - SIXTH * (f2 * tw)
    raise ValueError(f"row {i} out of range")


# The thirteen identities satisfied by a contact map, in the order they are
# checked.  The target is expressed through the horizontal Jacobian ``jh``
# and the horizontal block ``h[i][j] = X_j f_i`` (0-based inside h).
CONTACT_IDENTITIES: tuple[tuple[int, int, Callable], ...] = (
    (3, 1, lambda jh, h: 0),
    (4, 1, lambda jh, h: 0),
    (5, 1, lambda jh, h: 0),
    (3, 2, lambda jh, h: 0),
    (4, 2, lambda jh, h: 0),
    (5, 2, lambda jh, h: 0),
    (3, 3, lambda jh, h: jh),
    (4, 3, lambda jh, h: 0),
    (5, 3, lambda jh, h: 0),
    (4, 4, lambda jh, h: jh * h[0][0]),
    (5, 4, lambda jh, h: jh * h[1][0]),
    (4, 5, lambda jh, h: jh * h[0][1]),
    (5, 5, lambda jh, h: jh * h[1][1]),
)

HORIZONTAL_ENTRIES = ((1, 1), (1, 2), (2, 1), (2, 2))
DEFINED_ENTRIES = frozenset(HORIZONTAL_ENTRIES) | {(i, j) for i, j, _ in CONTACT_IDENTITIES}


def pansu_entry(f, i: int, j: int) -> Poly:
    """The polynomial (Pf)_{i,j} for the entries with a closed formula."""
    if (i, j) not in DEFINED_ENTRIES:
        raise ValueError(f"no formula for Pansu entry ({i}, {j})")
    f = _as_map(f)
    return _row_entry(f, i, lambda p: apply_frame(j - 1, p))


def horizontal_block(f) -> list[list[Poly]]:
    f = _as_map(f)
    return [[apply_frame(j, f[i]) for j in range(2)] for i in range(2)]


@dataclass(frozen=True)
class PansuMatrix:
    """The graded 5x5 Pansu matrix of a contact map, with J_H f."""

    entries: tuple[tuple[Poly, ...], ...]
    jh: Poly

    def det(self) -> Poly:
        return poly_det([list(r) for r in self.entries])

    def at(self, point: Sequence) -> list[list]:
        return [[e.eval(point) for e in row] for row in self.entries]

    def is_constant(self) -> bool:
        return all(e.is_constant() for row in self.entries for e in row)

    def constant(self) -> list[list[Fraction]]:
        return [[e.constant_term() for e in row] for row in self.entries]

    def to_json(self) -> dict:
        return {
            "entries": [[e.to_json() for e in row] for row in self.entries],
            "jh": self.jh.to_json(),
        }

    def __str__(self) -> str:
        rows = ["[" + ", ".join(str(e) for e in row) + "]" for row in self.entries]
        return "\n".join(rows)


def assemble_pansu_matrix(f) -> PansuMatrix:
    """Horizontal block, (3,3), and the (4..5, 4..5) block; zero elsewhere."""
    f = _as_map(f)
    rows = [[Poly.zero() for _ in range(NVARS)] for _ in range(NVARS)]
    for i, j in HORIZONTAL_ENTRIES:
        rows[i - 1][j - 1] = pansu_entry(f, i, j)
    for i, j in ((3, 3), (4, 4), (4, 5), (5, 4), (5, 5)):
        rows[i - 1][j - 1] = pansu_entry(f, i, j)
    for i, j in ((3, 1), (3, 2), (4, 1), (4, 2), (5, 1), (5, 2), (4, 3), (5, 3)):
        rows[i - 1][j - 1] = pansu_entry(f, i, j)
    return PansuMatrix(tuple(tuple(r) for r in rows), horizontal_jacobian(f))


def poly_det(m: list[list]) -> Poly:
    """Determinant by cofactor expansion along the sparsest row."""
    n = len(m)
    if n == 1:
        return m[0][0]
    zero = Poly.zero()
    r = min(range(n), key=lambda k: sum(1 for e in m[k] if e))
    total = zero
    for c, e in enumerate(m[r]):
        if not e:
            continue
        minor = [row[:c] + row[c + 1:] for k, row in enumerate(m) if k != r]
        term = e * poly_det(minor)
        total = total + term if (r + c) % 2 == 0 else total - term
    return total


@dataclass
class ContactReport:
    status: str
    witness: tuple[int, int] | None = None
    residual: Poly | None = None
    matrix: PansuMatrix | None = None
    det_certified: bool = False
    checked: list[tuple[int, int]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        out = {
            "status": self.status,
            "witness_entry": list(self.witness) if self.witness else None,
            "residual": self.residual.to_json() if self.residual is not None else None,
        }
        if self.matrix is not None:
            out["pansu_matrix"] = self.matrix.to_json()
            out["det_equals_jh5"] = self.det_certified
        return out

    def text(self) -> str:
        if self.passed:
            lines = [f"contact: pass ({len(self.checked)} identities hold exactly)"]
            if self.matrix is not None:
                lines.append(f"J_H f = {self.matrix.jh}")
                lines.append(f"det(Pf) = J_H^5 f: {'certified' if self.det_certified else 'FAILED'}")
                lines.append("Pansu matrix:")
                lines.append(str(self.matrix))
            return "\n".join(lines)
        i, j = self.witness
        return f"contact: fail at entry ({i},{j}), residual {self.residual}"


def check_contact(fg: PolyMapPair) -> ContactReport:
    """Check the thirteen identities exactly, in order; stop at the first failure."""
    if not isinstance(fg, PolyMapPair):
        raise TypeError("check_contact needs a certified PolyMapPair")
    f = fg.f
    jh = horizontal_jacobian(f)
    h = horizontal_block(f)
    checked = []
    for i, j, target in CONTACT_IDENTITIES:
        residual = pansu_entry(f, i, j) - target(jh, h)
        if residual:
            return ContactReport("fail", (i, j), residual, checked=checked)
        checked.append((i, j))
    matrix = assemble_pansu_matrix(f)
    det_ok = matrix.det() == jh**5
    return ContactReport("pass" if det_ok else "fail", None if det_ok else (0, 0),
                         None if det_ok else matrix.det() - jh**5, matrix, det_ok, checked)


def pullback_entry(f, i: int, j: int) -> Poly:
    """<f* theta_i, Y_j>: the second, independent route to the listed entries."""
    return pair(pullback(_as_map(f), coframe()[i - 1]), left_frame()[j - 1])


# -- commutation identities --------------------------------------------------

COMMUTATION_INDICES = tuple((a, b, c) for a in (4, 5) for b in (1, 2) for c in (1, 2))


def commutation_first_order(f, a: int, b: int, c: int) -> Poly:
    """First-order expression equal to X_b(Pf)_{a,3+c} − Z_c(Pf)_{a,b}.

    With D = X_b, E = Z_c and k = a − 3 it reads
    D f3·E fk − D fk·E f3 + ½ fk (D f1·E f2 − D f2·E f1).
    """
    f = _as_map(f)
    D = left_frame()[b - 1]
    E = left_frame()[2 + c]
    f1, f2, f3 = f[0], f[1], f[2]
    fk = f[a - 4]
    return (D(f3) * E(fk) - D(fk) * E(f3)
            + HALF * fk * (D(f1) * E(f2) - D(f2) * E(f1)))


def verify_commutation_identity(f, a: int, b: int, c: int) -> Poly:
    """Residual of X_b(Pf)_{a,3+c} − Z_c(Pf)_{a,b} − first-order expression.

    Pure calculus: zero for every polynomial map, contact or not.
    """
    if a not in (4, 5) or b not in (1, 2) or c not in (1, 2):
        raise ValueError("need a in {4,5}, b in {1,2}, c in {1,2}")
    f = _as_map(f)
    X = left_frame()[b - 1]
    Z = left_frame()[2 + c]
    lhs = X(pansu_entry(f, a, 3 + c)) - Z(pansu_entry(f, a, b))
    return lhs - commutation_first_order(f, a, b, c)


def reduced_commutation_residual(f, a: int, b: int, c: int) -> Poly:
    """X_b(Pf)_{a,3+c} + (X_b f_{a−3})·<f*theta, Z_c>; zero for contact maps."""
    f = _as_map(f)
    X = left_frame()[b - 1]
    theta_z = pullback_entry(f, 3, 3 + c)
    return X(pansu_entry(f, a, 3 + c)) + X(f[a - 4]) * theta_z


# -- numeric limit ------------------------------------------------------------

UNIT = tuple(tuple(1.0 if k == j else 0.0 for k in range(NVARS)) for j in range(NVARS))


def as_callable(f) -> Callable[[Sequence[float]], tuple]:
    if isinstance(f, PolyMapPair):
        f = f.f
    if isinstance(f, PolyMap):
        comps = f.components
        return lambda p: tuple(float(c.eval(p)) for c in comps)
    return f


def _call(f, point):
    try:
        value = tuple(float(v) for v in f(point))
    except (ValueError, ZeroDivisionError, OverflowError, ArithmeticError) as err:
        raise DomainError(f"map not evaluable at {point}: {err}") from err
    if len(value) != NVARS:
        raise DomainError(f"map returned {len(value)} components at {point}")
    if not all(math.isfinite(v) for v in value):
        raise NonFiniteError(f"non-finite value {value} at {point}")
    return value


def difference_quotient(f, p: Sequence[float], r: float, j: int) -> tuple:
    """δ_{1/r}(f(p)⁻¹ · f(p·δ_r(e_j))) in coordinates (exp and log are the identity)."""
    fp = _call(f, p)
    moved = _call(f, group_mul(p, dilate(r, UNIT[j])))
    out = dilate(1.0 / r, group_mul(group_inv(fp), moved))
    if not all(math.isfinite(v) for v in out):
        raise NonFiniteError(f"non-finite difference quotient at r={r}")
    return out


def pansu_numeric(f, p: Sequence, radii: Sequence[float], workers: int | None = None) -> list[np.ndarray]:
    """Estimates of the Pansu matrix at p, one 5x5 array per radius.

    Column j is the difference quotient in direction Y_j|_0.  No convergence
    judgement is made here; see ``convergence_report``.
    """
    radii = [float(r) for r in radii]
    if not radii or any(r <= 0 for r in radii):
        raise ValueError("radii must be positive")
    if any(b >= a for a, b in zip(radii, radii[1:])):
        raise ValueError("radii must be strictly decreasing")
    g = as_callable(f)
    p = tuple(float(x) for x in p)
    jobs = [(r, j) for r in radii for j in range(NVARS)]
    if workers and workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            cols = list(pool.map(lambda job: difference_quotient(g, p, *job), jobs))
    else:
        cols = [difference_quotient(g, p, r, j) for r, j in jobs]
    out = []
    for k in range(len(radii)):
        block = cols[k * NVARS:(k + 1) * NVARS]
        out.append(np.array(block, dtype=float).T)
    return out


EPS = float(np.finfo(float).eps)


def roundoff_floor(r: float, scale: float = 1.0, factor: float = 10.0) -> float:
    """Round-off level of a difference quotient at radius r.

    δ_{1/r} multiplies the weight-3 coordinates by r⁻³, so an absolute
    rounding error of order eps·scale³ becomes eps·scale³/r³.
    """
    return factor * EPS * max(scale, 1.0) ** 3 / r**3


@dataclass
class ConvergenceReport:
    radii: list[float]
    errors: list[float]
    floors: list[float]
    ratios: list[float | None]
    min_factor: float
    converged: bool
    reference: str

    @property
    def final_error(self) -> float:
        return self.errors[-1]

    def to_json(self) -> dict:
        return {
            "radii": self.radii,
            "errors": self.errors,
            "roundoff_floors": self.floors,
            "ratios": self.ratios,
            "min_factor_per_decade": self.min_factor,
            "reference": self.reference,
            "converged": self.converged,
        }


def convergence_report(estimates: Sequence[np.ndarray], radii: Sequence[float],
                       exact=None, min_factor: float = 5.0, scale: float = 1.0,
                       floor_factor: float = 10.0) -> ConvergenceReport:
    """Ratio test on componentwise (max-abs) errors.

    Errors are measured against ``exact`` when given, otherwise between
    successive estimates.  A step passes when the error shrinks by
    ``min_factor`` per decade of r, or when the new error is already within
    the round-off floor at that radius (no truncation error left to shrink).
    ``scale`` should bound the coordinates involved (|p|, |f(p)|).
    """
    radii = [float(r) for r in radii]
    if exact is not None:
        ref = np.array(exact, dtype=float)
        errors = [float(np.max(np.abs(m - ref))) for m in estimates]
        used = radii
        reference = "exact"
    else:
        errors = [float(np.max(np.abs(a - b))) for a, b in zip(estimates, estimates[1:])]
        used = radii[:-1]
        reference = "successive"
    floors = [roundoff_floor(r, scale, floor_factor) for r in used]
    ratios: list[float | None] = []
    ok = True
    steps = zip(zip(used, errors), zip(used[1:], errors[1:], floors[1:]))
    for (r0, e0), (r1, e1, fl) in steps:
        decades = math.log10(r0 / r1)
        ratio = e0 / e1 if e1 > 0 else None
        ratios.append(ratio)
        if e1 <= fl:
            continue
        if ratio is None or ratio < min_factor**decades:
            ok = False
    return ConvergenceReport(radii, errors, floors, ratios, min_factor, ok, reference)


def point_scale(f, p: Sequence[float]) -> float:
    """max(1, |p|_inf, |f(p)|_inf), the magnitude entering the round-off floor."""
    g = as_callable(f)
    fp = _call(g, tuple(float(x) for x in p))
    return max([1.0] + [abs(float(x)) for x in p] + [abs(x) for x in fp])


def compose_callables(f, g) -> Callable:
    f, g = as_callable(f), as_callable(g)
    return lambda p: f(g(p))
