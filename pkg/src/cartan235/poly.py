"""Sparse multivariate polynomials with exact rational coefficients.

Polynomials live in a fixed number of variables.  The default ring is the
coordinate ring of the Cartan group, with variables ordered (x1, x2, y, z1, z2)
and carrying the dilation weights (1, 1, 2, 3, 3).  Rings with more variables
(two or three copies of the coordinates, as needed for the group law and its
associativity) reuse the same weights cyclically.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Sequence

COORD_NAMES = ("x1", "x2", "y", "z1", "z2")
WEIGHTS = (1, 1, 2, 3, 3)
NVARS = 5

Exponent = tuple[int, ...]


def to_fraction(value) -> Fraction:
    """Coerce ints, Fractions and strings like ``"-3/4"`` to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip().replace("−", "-")
        return Fraction(text)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def format_fraction(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def var_name(i: int) -> str:
    # copies beyond the first are primed: x1', x1'', ...
    return COORD_NAMES[i % NVARS] + "'" * (i // NVARS)


def var_weight(i: int) -> int:
    return WEIGHTS[i % NVARS]


class Poly:
    """An immutable sparse polynomial over the rationals.

    ``terms`` maps exponent tuples (length ``nvars``) to nonzero Fractions.
    Arithmetic with ints and Fractions promotes them to constants.
    """

    __slots__ = ("_terms", "nvars", "_hash")

    def __init__(self, terms: Mapping[Exponent, object] | None = None, nvars: int = NVARS):
        self.nvars = nvars
        clean: dict[Exponent, Fraction] = {}
        if terms:
            for exp, c in terms.items():
                exp = tuple(exp)
                if len(exp) != nvars:
                    raise ValueError(f"exponent {exp} does not have {nvars} entries")
                if any(e < 0 for e in exp):
                    raise ValueError(f"negative exponent in {exp}")
                c = to_fraction(c)
                if c:
                    clean[exp] = clean.get(exp, 0) + c
                    if not clean[exp]:
                        del clean[exp]
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict[Exponent, Fraction], nvars: int) -> "Poly":
        # trusted constructor: terms already canonical
        p = object.__new__(cls)
        p._terms = terms
        p.nvars = nvars
        p._hash = None
        return p

    @classmethod
    def const(cls, c, nvars: int = NVARS) -> "Poly":
        c = to_fraction(c)
        return cls._raw({(0,) * nvars: c} if c else {}, nvars)

    @classmethod
    def var(cls, i: int, nvars: int = NVARS) -> "Poly":
        if not 0 <= i < nvars:
            raise ValueError(f"variable index {i} out of range for {nvars} variables")
        exp = [0] * nvars
        exp[i] = 1
        return cls._raw({tuple(exp): Fraction(1)}, nvars)

    @classmethod
    def zero(cls, nvars: int = NVARS) -> "Poly":
        return cls._raw({}, nvars)

    @classmethod
    def one(cls, nvars: int = NVARS) -> "Poly":
        return cls.const(1, nvars)

    @property
    def terms(self) -> dict[Exponent, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and not any(next(iter(self._terms))))

    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * self.nvars, Fraction(0))

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError(f"ring mismatch: {self.nvars} vs {other.nvars} variables")
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(other, self.nvars)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if len(other._terms) > len(self._terms):
            big, small = other._terms, self._terms
        else:
            big, small = self._terms, other._terms
        out = dict(big)
        for exp, c in small.items():
            s = out.get(exp)
            if s is None:
                out[exp] = c
            else:
                s += c
                if s:
                    out[exp] = s
                else:
                    del out[exp]
        return Poly._raw(out, self.nvars)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw({e: -c for e, c in self._terms.items()}, self.nvars)

    def __pos__(self) -> "Poly":
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def scale(self, c) -> "Poly":
        c = to_fraction(c)
        if not c:
            return Poly.zero(self.nvars)
        return Poly._raw({e: v * c for e, v in self._terms.items()}, self.nvars)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e)
                out[e] = c1 * c2 if s is None else s + c1 * c2
        return Poly._raw({e: c for e, c in out.items() if c}, self.nvars)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(Fraction(1) / to_fraction(other))
        return NotImplemented

    def __pow__(self, n: int) -> "Poly":
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers are supported")
        result = Poly.one(self.nvars)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other, self.nvars)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.nvars == other.nvars and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    # -- calculus and substitution ---------------------------------------

    def partial(self, i: int) -> "Poly":
        """Exact derivative with respect to variable ``i`` (0-based)."""
        if not 0 <= i < self.nvars:
            raise ValueError(f"variable index {i} out of range")
        out = {}
        for exp, c in self._terms.items():
            k = exp[i]
            if k:
                e = exp[:i] + (k - 1,) + exp[i + 1:]
                out[e] = c * k
        return Poly._raw(out, self.nvars)

    def compose(self, subs: Sequence["Poly"]) -> "Poly":
        """Substitute ``subs[i]`` for variable ``i``.

        All substituted polynomials must share one ring, which becomes the
        ring of the result.
        """
        if len(subs) != self.nvars:
            raise ValueError(f"need {self.nvars} substitutions, got {len(subs)}")
        target = None
        for s in subs:
            if isinstance(s, Poly):
                target = s.nvars
                break
        if target is None:
            raise TypeError("compose needs polynomial substitutions; use eval for scalars")
        subs = [s if isinstance(s, Poly) else Poly.const(s, target) for s in subs]
        powers: list[dict[int, Poly]] = [{0: Poly.one(target), 1: s} for s in subs]

        def power(i: int, k: int) -> Poly:
            cache = powers[i]
            if k not in cache:
                cache[k] = power(i, k - 1) * subs[i]
            return cache[k]

        acc: dict[Exponent, Fraction] = {}
        for exp, c in self._terms.items():
            term = Poly.const(c, target)
            for i, k in enumerate(exp):
                if k:
                    term = term * power(i, k)
            for e, v in term._terms.items():
                s = acc.get(e)
                acc[e] = v if s is None else s + v
        return Poly._raw({e: c for e, c in acc.items() if c}, target)

    def eval(self, point: Sequence):
        """Evaluate at a point.  Exact for rational input, float for float input."""
        if len(point) != self.nvars:
            raise ValueError(f"point needs {self.nvars} coordinates")
        total = 0
        for exp, c in self._terms.items():
            term = c
            for v, k in zip(point, exp):
                if k:
                    term = term * v**k
            total = total + term
        if isinstance(total, int):
            total = Fraction(total)
        return total

    def __call__(self, *point):
        return self.eval(point)

    def extend(self, nvars: int, offset: int = 0) -> "Poly":
        """Embed into a ring with ``nvars`` variables, shifting indices by ``offset``."""
        if offset + self.nvars > nvars:
            raise ValueError("target ring too small")
        pad_l, pad_r = (0,) * offset, (0,) * (nvars - offset - self.nvars)
        return Poly._raw({pad_l + e + pad_r: c for e, c in self._terms.items()}, nvars)

    # -- degrees and ordering ---------------------------------------------

    def degree(self) -> int:
        """Euclidean total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    def weighted_degree(self) -> int:
        """Maximal weighted degree of a term; -1 for the zero polynomial."""
        return max((monomial_weight(e) for e in self._terms), default=-1)

    def is_weighted_homogeneous(self) -> bool:
        return len({monomial_weight(e) for e in self._terms}) <= 1

    def sorted_terms(self) -> list[tuple[Exponent, Fraction]]:
        return sorted(self._terms.items(), key=lambda t: monomial_key(t[0]))

    # -- presentation -----------------------------------------------------

    def __repr__(self) -> str:
        return f"Poly({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for exp, c in reversed(self.sorted_terms()):
            mono = "*".join(
                var_name(i) + (f"^{k}" if k > 1 else "") for i, k in enumerate(exp) if k
            )
            mag = abs(c)
            sign = "-" if c < 0 else "+"
            if mono:
                body = mono if mag == 1 else f"{mag}*{mono}"
            else:
                body = str(mag)
            pieces.append((sign, body))
        first_sign, first = pieces[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def to_json(self) -> list[dict]:
        return [{"c": format_fraction(c), "e": list(e)} for e, c in self.sorted_terms()]

    @classmethod
    def from_json(cls, data: Iterable[Mapping], nvars: int = NVARS) -> "Poly":
        terms: dict[Exponent, Fraction] = {}
        for item in data:
            try:
                exp = tuple(int(k) for k in item["e"])
                c = to_fraction(item["c"] if isinstance(item["c"], str) else item["c"])
            except (KeyError, TypeError, ValueError, ZeroDivisionError) as err:
                raise ValueError(f"bad polynomial term {item!r}: {err}") from err
            if len(exp) != nvars:
                raise ValueError(f"term exponent {list(exp)} must have {nvars} entries")
            terms[exp] = terms.get(exp, Fraction(0)) + c
        return cls(terms, nvars)


def monomial_weight(exp: Exponent) -> int:
    return sum(var_weight(i) * k for i, k in enumerate(exp))


def monomial_key(exp: Exponent):
    # graded by weighted degree, then lexicographic
    return (monomial_weight(exp), exp)


def variables(nvars: int = NVARS) -> tuple[Poly, ...]:
    return tuple(Poly.var(i, nvars) for i in range(nvars))


def monomials_of_weight(w: int, nvars: int = NVARS) -> list[Exponent]:
    """All exponent vectors of weighted degree exactly ``w``, in canonical order."""
    if w < 0:
        return []
    out: list[Exponent] = []

    def rec(i: int, remaining: int, prefix: tuple[int, ...]):
        if i == nvars:
            if remaining == 0:
                out.append(prefix)
            return
        wt = var_weight(i)
        for k in range(remaining // wt + 1):
            rec(i + 1, remaining - k * wt, prefix + (k,))

    rec(0, w, ())
    return sorted(out, key=monomial_key)


def monomial(exp: Exponent, coeff=1) -> Poly:
    return Poly({tuple(exp): coeff}, len(exp))
