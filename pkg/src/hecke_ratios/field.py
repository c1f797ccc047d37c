"""Exact arithmetic in the rings of integers of the nine imaginary quadratic
fields of class number one.

Elements are stored as ``a + b*w`` where ``w`` is ``(1 + sqrt(d))/2`` when
``d = 1 mod 4`` and ``sqrt(d)`` otherwise.  Python integers never overflow,
so every ring operation is exact.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

FIELDS = (-1, -2, -3, -7, -11, -19, -43, -67, -163)
EUCLIDEAN_FIELDS = (-1, -2, -3, -7, -11)

_TEXT_RE = re.compile(r"^\s*(-?\d+)([+-]\d+)\*w@(-?\d+)\s*$")


class FieldMismatch(ValueError):
    pass


class NotDivisible(ArithmeticError):
    pass


def check_field(d: int) -> int:
    if d not in FIELDS:
        raise ValueError(f"d={d} is not one of the class-number-one fields {FIELDS}")
    return d


def _omega_poly(d: int) -> tuple[int, int]:
    # w^2 = t*w + n0
    if d % 4 == 1:
        return 1, (d - 1) // 4
    return 0, d


@dataclass(frozen=True, slots=True)
class QuadInt:
    """The element ``a + b*w`` of O_K for K = Q(sqrt(d))."""

    a: int
    b: int
    d: int

    @classmethod
    def of(cls, a: int, b: int, d: int) -> "QuadInt":
        return cls(int(a), int(b), check_field(d))

    @classmethod
    def parse(cls, text: str) -> "QuadInt":
        """Parse the canonical form ``a+b*w@d`` (e.g. ``3+2*w@-1``)."""
        m = _TEXT_RE.match(text)
        if m is None:
            raise ValueError(f"not a canonical element string: {text!r}")
        return cls.of(int(m.group(1)), int(m.group(2)), int(m.group(3)))

    def __str__(self) -> str:
        return f"{self.a}{self.b:+d}*w@{self.d}"

    def __repr__(self) -> str:
        return f"QuadInt({self.a}, {self.b}, d={self.d})"

    # -- ring structure --------------------------------------------------

    def _coerce(self, other) -> "QuadInt":
        if isinstance(other, QuadInt):
            if other.d != self.d:
                raise FieldMismatch(f"fields differ: {self.d} vs {other.d}")
            return other
        if isinstance(other, int):
            return QuadInt(other, 0, self.d)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadInt(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadInt(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __neg__(self) -> "QuadInt":
        return QuadInt(-self.a, -self.b, self.d)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        t, n0 = _omega_poly(self.d)
        be = self.b * o.b
        return QuadInt(self.a * o.a + n0 * be, self.a * o.b + self.b * o.a + t * be, self.d)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "QuadInt":
        if k < 0:
            raise ValueError("negative powers are not ring elements")
        result = QuadInt(1, 0, self.d)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conj(self) -> "QuadInt":
        t, _ = _omega_poly(self.d)
        return QuadInt(self.a + t * self.b, -self.b, self.d)

    def norm(self) -> int:
        t, n0 = _omega_poly(self.d)
        return self.a * self.a + t * self.a * self.b - n0 * self.b * self.b

    def trace(self) -> int:
        t, _ = _omega_poly(self.d)
        return 2 * self.a + t * self.b

    def __bool__(self) -> bool:
        return bool(self.a or self.b)

    def is_unit(self) -> bool:
        return self.norm() == 1

    def is_odd(self) -> bool:
        """True when the ideal (self) is coprime to (2)."""
        return self.norm() % 2 == 1

    def to_complex(self) -> complex:
        return complex(self.a, 0) + self.b * omega_complex(self.d)

    def sort_key(self) -> tuple[int, int, int]:
        return (self.norm(), self.a, self.b)


def norm(n: QuadInt) -> int:
    return n.norm()


def ring_arithmetic(op: str, x: QuadInt, y: QuadInt | None = None) -> QuadInt:
    """Dispatch ``add``/``sub``/``mul``/``neg``/``conj`` by name."""
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "neg":
        return -x
    if op == "conj":
        return x.conj()
    raise ValueError(f"unknown operation {op!r}")


def omega_complex(d: int) -> complex:
    r = 1j * math.sqrt(-d)
    return (1 + r) / 2 if d % 4 == 1 else r


def exact_divide(m: QuadInt, n: QuadInt) -> QuadInt:
    """Return q with m = q*n, or raise NotDivisible."""
    if not n:
        raise ZeroDivisionError("division by zero element")
    m = n._coerce(m)
    num = m * n.conj()
    nn = n.norm()
    if num.a % nn or num.b % nn:
        raise NotDivisible(f"{n} does not divide {m}")
    return QuadInt(num.a // nn, num.b // nn, n.d)


def divides(n: QuadInt, m: QuadInt) -> bool:
    try:
        exact_divide(m, n)
    except NotDivisible:
        return False
    return True


def nearest_quotient(m: QuadInt, n: QuadInt) -> QuadInt:
    """Quotient q minimising N(m - q*n) over the four coordinate roundings of m/n."""
    if not n:
        raise ZeroDivisionError("division by zero element")
    num = m * n.conj()
    nn = n.norm()
    xa, xb = num.a // nn, num.b // nn
    best = None
    for qa in (xa, xa + 1):
        for qb in (xb, xb + 1):
            q = QuadInt(qa, qb, n.d)
            r = (m - q * n).norm()
            if best is None or r < best[0]:
                best = (r, q)
    return best[1]


@dataclass(frozen=True, slots=True)
class QuadRat:
    """An element ``numerator / denominator`` of K, kept in lowest terms."""

    numerator: QuadInt
    denominator: int

    def __post_init__(self):
        if self.denominator <= 0:
            raise ValueError("denominator must be positive")
        g = math.gcd(math.gcd(self.numerator.a, self.numerator.b), self.denominator)
        if g > 1:
            object.__setattr__(self, "numerator",
                               QuadInt(self.numerator.a // g, self.numerator.b // g, self.numerator.d))
            object.__setattr__(self, "denominator", self.denominator // g)

    @classmethod
    def quotient(cls, m: QuadInt, n: QuadInt) -> "QuadRat":
        """The field element m/n."""
        if not n:
            raise ZeroDivisionError("division by zero element")
        return cls(m * n.conj(), n.norm())

    def coords(self) -> tuple[Fraction, Fraction]:
        return (Fraction(self.numerator.a, self.denominator),
                Fraction(self.numerator.b, self.denominator))

    def trace(self) -> Fraction:
        return Fraction(self.numerator.trace(), self.denominator)

    def trace_over_sqrt_disc(self) -> Fraction:
        """Trace(z / sqrt(D_K)) with sqrt(D_K) = i*sqrt(|D_K|).

        (z - conj z)/sqrt(D_K) is exactly the w-coordinate of z in every field.
        """
        return Fraction(self.numerator.b, self.denominator)


@dataclass(frozen=True)
class FieldParams:
    d: int
    disc: int
    omega_desc: str
    units: tuple[QuadInt, ...]
    c_K: QuadInt
    norm_c_K: int
    two_splitting: str

    @property
    def num_units(self) -> int:
        return len(self.units)

    def elem(self, a: int, b: int = 0) -> QuadInt:
        return QuadInt(a, b, self.d)


@lru_cache(maxsize=None)
def field_params(d: int) -> FieldParams:
    check_field(d)
    one, w = QuadInt(1, 0, d), QuadInt(0, 1, d)
    if d == -1:
        units = (one, -one, w, -w)
        c_K = (one + w) ** 5
    elif d == -3:
        units = (one, -one, w, -w, w * w, -(w * w))
        c_K = QuadInt(8, 0, d)
    elif d == -2:
        units = (one, -one)
        c_K = 4 * w
    else:
        units = (one, -one)
        c_K = QuadInt(8, 0, d)
    if d in (-1, -2):
        splitting = "ramified"
    elif d % 8 == 1:
        splitting = "split"
    else:
        splitting = "inert"
    return FieldParams(
        d=d,
        disc=d if d % 4 == 1 else 4 * d,
        omega_desc="half(1+sqrt(d))" if d % 4 == 1 else "sqrt(d)",
        units=units,
        c_K=c_K,
        norm_c_K=c_K.norm(),
        two_splitting=splitting,
    )
