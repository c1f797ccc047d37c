"""Primary generators of odd ideals.

An odd element is primary when its class modulo 4 (modulo (1+i)^3 for
Q(i)) lies in a fixed set of representatives of (O_K/4)^x / U_K:

    d = -1          1 mod (1+i)^3
    d = -2          G4^2 x {1, -(1+w)}        mod 4
    d = -3          <1+2w>                    mod 4
    other d         G4^2 x <1+2w>             mod 4

where G4^2 is the group of squares of invertible classes mod 4.  The sets
are built once per field and membership is a table lookup.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .field import QuadInt, field_params
from .ideals import IdealMatrix, ideal_of


class NotOddError(ValueError):
    pass


@dataclass(frozen=True)
class PrimarySet:
    d: int
    modulus: QuadInt
    ideal: IdealMatrix
    classes: frozenset[tuple[int, int]]
    invertible_count: int

    def key(self, n: QuadInt) -> tuple[int, int]:
        x, y = self.ideal.reduce_coords(n.a, n.b)
        return int(x), int(y)

    def contains(self, n: QuadInt) -> bool:
        return self.key(n) in self.classes


def _cyclic(g: QuadInt, I: IdealMatrix) -> set[tuple[int, int]]:
    out, cur = set(), QuadInt(1, 0, g.d)
    while True:
        k = I.reduce_coords(cur.a, cur.b)
        if k in out:
            return out
        out.add(k)
        cur = I.reduce(cur * g)


@lru_cache(maxsize=None)
def primary_set(d: int) -> PrimarySet:
    fp = field_params(d)
    one, w = QuadInt(1, 0, d), QuadInt(0, 1, d)
    if d == -1:
        modulus = (one + w) ** 3
        I = ideal_of(modulus)
        classes = {I.reduce_coords(1, 0)}
        inv = sum(1 for x in range(I.d1) for y in range(I.d2) if QuadInt(x, y, d).is_odd())
        ps = PrimarySet(d, modulus, I, frozenset(classes), inv)
    else:
        modulus = QuadInt(4, 0, d)
        I = ideal_of(modulus)
        G4 = [QuadInt(x, y, d) for x in range(4) for y in range(4) if QuadInt(x, y, d).is_odd()]
        squares = {I.reduce_coords(*_coords(g * g)) for g in G4}
        if d == -3:
            extra = _cyclic(one + 2 * w, I)
            classes = extra
        else:
            extra = _cyclic(one + 2 * w, I) if d != -2 else {I.reduce_coords(1, 0),
                                                              I.reduce_coords(*_coords(-(one + w)))}
            classes = set()
            for s in squares:
                for e in extra:
                    prod = QuadInt(*s, d) * QuadInt(*e, d)
                    classes.add(I.reduce_coords(prod.a, prod.b))
        ps = PrimarySet(d, modulus, I, frozenset(classes), len(G4))
    if len(ps.classes) * fp.num_units != ps.invertible_count:  # pragma: no cover
        raise ArithmeticError(f"primary classes for d={d} do not index (O/m)^x / U_K")
    return ps


def _coords(z: QuadInt) -> tuple[int, int]:
    return z.a, z.b


def is_primary(n: QuadInt) -> bool:
    if not n.is_odd():
        raise NotOddError(f"{n} is not odd; primary is only defined for odd elements")
    return primary_set(n.d).contains(n)


def primary_normalize(n: QuadInt) -> tuple[QuadInt, QuadInt]:
    """Return (u, u*n) with u the unique unit making u*n primary."""
    if not n or not n.is_odd():
        raise NotOddError(f"{n} is zero or even")
    ps = primary_set(n.d)
    hits = [(u, u * n) for u in field_params(n.d).units if ps.contains(u * n)]
    if len(hits) != 1:  # pragma: no cover - uniqueness is checked exhaustively in tests
        raise ArithmeticError(f"{len(hits)} primary associates of {n}")
    return hits[0]


def is_e_primary(n: QuadInt) -> bool:
    """The E-primary condition for d = -3, read in the basis 1, w^2.

    n = a + b*w^2 with (n, 6) = 1 is E-primary when n = +-1 mod 3 and
    a+b = 1 mod 4 if b even, b = 1 mod 4 if a even, a = 3 mod 4 if ab odd.
    """
    if n.d != -3:
        raise ValueError("E-primary is defined for d = -3 only")
    # w = (1 + sqrt(-3))/2 satisfies w = 1 + w^2, so x + y*w = (x + y) + y*w^2
    a, b = n.a + n.b, n.b
    three = QuadInt(3, 0, -3)
    I3 = ideal_of(three)
    if not (I3.contains(n - 1) or I3.contains(n + 1)):
        return False
    if b % 2 == 0:
        return (a + b) % 4 == 1
    if a % 2 == 0:
        return b % 4 == 1
    return a % 4 == 3


def primary_elements(d: int, maxnorm: int) -> list[QuadInt]:
    """All odd primary elements with norm <= maxnorm, sorted by (norm, a, b)."""
    fp = field_params(d)
    t = 1 if d % 4 == 1 else 0
    ps = primary_set(d)
    out = []
    bmax = math.isqrt(4 * maxnorm // abs(fp.disc)) + 1
    span = math.isqrt(maxnorm) + 2
    for b in range(-bmax, bmax + 1):
        a0 = -(t * b) // 2
        for a in range(a0 - span, a0 + span + 1):
            n = QuadInt(a, b, d)
            N = n.norm()
            if 0 < N <= maxnorm and N % 2 and ps.contains(n):
                out.append(n)
    out.sort(key=lambda n: (n.norm(), n.a, n.b))
    return out
