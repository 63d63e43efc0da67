"""Exact multivariate polynomials over the rationals (and Gaussian rationals).

Coefficients are fractions.Fraction by default; GaussianRational (a + bi with
rational a, b) is accepted wherever a coefficient is, which is what the
nilpotent-family verification needs.  A ring fixes the variable list and the
monomial order; exponent vectors are plain tuples aligned with the variables.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..errors import RingMismatch, ValidationError


class GaussianRational:
    """Exact element a + b*i of Q(i)."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @classmethod
    def of(cls, value):
        """Coerce ints/Fractions; None for types handled elsewhere."""
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (int, Fraction)):
            return cls(value)
        return None

    def __add__(self, other):
        o = GaussianRational.of(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        o = GaussianRational.of(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = GaussianRational.of(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = GaussianRational.of(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = GaussianRational.of(other)
        if o is None:
            return NotImplemented
        norm = o.re * o.re + o.im * o.im
        if norm == 0:
            raise ZeroDivisionError("division by zero GaussianRational")
        return self * GaussianRational(o.re / norm, -o.im / norm)

    def __rtruediv__(self, other):
        o = GaussianRational.of(other)
        if o is None:
            return NotImplemented
        return o / self

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im)) if self.im else hash(self.re)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        if not self.im:
            return str(self.re)
        sign = "+" if self.im > 0 else "-"
        return f"({self.re}{sign}{abs(self.im)}i)"


I_UNIT = GaussianRational(0, 1)

LEX = "lex"
GREVLEX = "grevlex"
_ORDERS = (LEX, GREVLEX)


@dataclass(frozen=True)
class PolyRing:
    """Variable list (most significant first) plus a monomial order."""

    variables: tuple[str, ...]
    order: str = LEX

    def __post_init__(self):
        if self.order not in _ORDERS:
            raise ValidationError(f"unknown monomial order {self.order!r}")
        if len(set(self.variables)) != len(self.variables):
            raise ValidationError("duplicate variable names")

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def key(self, mono: tuple[int, ...]):
        """Sort key: tuple comparison of keys realizes the ring order."""
        if self.order == LEX:
            return mono
        return (sum(mono), tuple(-e for e in reversed(mono)))

    def zero(self) -> "MultiPoly":
        return MultiPoly(self, {})

    def one(self) -> "MultiPoly":
        return self.const(1)

    def const(self, c) -> "MultiPoly":
        c = _coerce(c)
        if not c:
            return MultiPoly(self, {})
        return MultiPoly(self, {(0,) * self.nvars: c})

    def var(self, name: str) -> "MultiPoly":
        try:
            i = self.variables.index(name)
        except ValueError:
            raise RingMismatch(f"no variable {name!r} in ring {self.variables}")
        mono = [0] * self.nvars
        mono[i] = 1
        return MultiPoly(self, {tuple(mono): Fraction(1)})

    def vars(self) -> tuple["MultiPoly", ...]:
        return tuple(self.var(v) for v in self.variables)

    def from_terms(self, terms: dict) -> "MultiPoly":
        out = {}
        for mono, c in terms.items():
            c = _coerce(c)
            if len(mono) != self.nvars:
                raise RingMismatch(f"exponent vector {mono} has wrong arity")
            if c:
                out[tuple(int(e) for e in mono)] = c
        return MultiPoly(self, out)

    def with_order(self, order: str) -> "PolyRing":
        return PolyRing(self.variables, order)


def _coerce(c):
    if isinstance(c, (GaussianRational, Fraction)):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise ValidationError(f"unsupported coefficient type {type(c).__name__}")


class MultiPoly:
    """Immutable sparse polynomial: map exponent-tuple -> nonzero coefficient."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms

    # -- construction helpers -------------------------------------------------

    def _same_ring(self, other: "MultiPoly"):
        if self.ring != other.ring:
            raise RingMismatch(
                f"rings differ: {self.ring.variables}/{self.ring.order} vs "
                f"{other.ring.variables}/{other.ring.order}")

    # -- predicates -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction, GaussianRational)):
            return self == self.ring.const(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=0)

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, MultiPoly):
            other = self.ring.const(other)
        self._same_ring(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return MultiPoly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, MultiPoly):
            other = self.ring.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return self.ring.const(other) + (-self)

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            c = _coerce(other)
            if not c:
                return self.ring.zero()
            return MultiPoly(self.ring,
                             {m: cc * c for m, cc in self.terms.items()})
        self._same_ring(other)
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return MultiPoly(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValidationError("negative powers are not polynomials")
        out = self.ring.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    # -- leading data ---------------------------------------------------------

    def leading_monomial(self) -> tuple[int, ...]:
        if not self.terms:
            raise ValidationError("zero polynomial has no leading term")
        return max(self.terms, key=self.ring.key)

    def leading_coefficient(self):
        return self.terms[self.leading_monomial()]

    def leading_term(self) -> tuple[tuple[int, ...], object]:
        m = self.leading_monomial()
        return m, self.terms[m]

    def monic(self) -> "MultiPoly":
        if not self.terms:
            return self
        lc = self.leading_coefficient()
        return MultiPoly(self.ring, {m: c / lc for m, c in self.terms.items()})

    # -- substitution and evaluation -------------------------------------------

    def substitute(self, mapping: dict) -> "MultiPoly":
        """Replace variables by polynomials or scalars (others stay)."""
        subs = {}
        for name, val in mapping.items():
            if name not in self.ring.variables:
                raise RingMismatch(f"no variable {name!r} to substitute")
            subs[self.ring.variables.index(name)] = (
                val if isinstance(val, MultiPoly) else self.ring.const(val))
        out = self.ring.zero()
        for mono, c in self.terms.items():
            term = self.ring.const(c)
            for i, e in enumerate(mono):
                if e == 0:
                    continue
                if i in subs:
                    term = term * subs[i] ** e
                else:
                    mvec = [0] * self.ring.nvars
                    mvec[i] = e
                    term = term * MultiPoly(self.ring,
                                            {tuple(mvec): Fraction(1)})
            out = out + term
        return out

    def evaluate(self, values: dict):
        """Evaluate at a full assignment of scalars (exact arithmetic)."""
        missing = [v for i, v in enumerate(self.ring.variables)
                   if v not in values and any(m[i] for m in self.terms)]
        if missing:
            raise ValidationError(f"missing values for {missing}")
        total = 0
        for mono, c in self.terms.items():
            acc = c
            for i, e in enumerate(mono):
                for _ in range(e):
                    acc = acc * values[self.ring.variables[i]]
            total = acc + total
        return total

    def to_ring(self, ring: PolyRing) -> "MultiPoly":
        """Reinterpret in another ring (matching by variable name)."""
        idx = []
        for v in self.ring.variables:
            if v not in ring.variables:
                raise RingMismatch(f"target ring lacks variable {v!r}")
            idx.append(ring.variables.index(v))
        out: dict = {}
        for mono, c in self.terms.items():
            mvec = [0] * ring.nvars
            for i, e in enumerate(mono):
                mvec[idx[i]] = e
            out[tuple(mvec)] = c
        return MultiPoly(ring, out)

    # -- text format ------------------------------------------------------------

    def text(self) -> str:
        """Sparse report form: one 'coeff * x^e ...' line per term, descending."""
        if not self.terms:
            return "0"
        lines = []
        for mono in sorted(self.terms, key=self.ring.key, reverse=True):
            c = self.terms[mono]
            factors = " ".join(
                f"{self.ring.variables[i]}^{e}"
                for i, e in enumerate(mono) if e)
            lines.append(f"{c} * {factors}" if factors else f"{c}")
        return "\n".join(lines)

    def __repr__(self):
        return f"MultiPoly({self.text().replace(chr(10), ' + ')})"
