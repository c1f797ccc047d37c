"""Ideals of O_K as rank-2 lattices in Hermite normal form, prime splitting,
factorisation of elements and complete residue systems.

Gcds are ideal sums computed in HNF, so the non-Euclidean fields
(d = -19, -43, -67, -163) go through the same code as the others.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

import numpy as np

from .field import QuadInt, FieldMismatch, NotDivisible, exact_divide, field_params, _omega_poly
from .intarith import factorint, kronecker, sqrt_mod


class GeneratorSearchError(RuntimeError):
    """No generator in the search box: a class-number-one PID must have one."""


def _hnf(vectors: list[tuple[int, int]]) -> tuple[int, int, int]:
    vecs = [list(v) for v in vectors if v[0] or v[1]]
    while True:
        nz = [v for v in vecs if v[1]]
        if len(nz) <= 1:
            break
        piv = min(nz, key=lambda v: abs(v[1]))
        for v in nz:
            if v is not piv:
                k = v[1] // piv[1]
                v[0] -= k * piv[0]
                v[1] -= k * piv[1]
    nz = [v for v in vecs if v[1]]
    if not nz:
        raise ValueError("vectors do not span a rank-2 lattice")
    c0, d2 = nz[0]
    if d2 < 0:
        c0, d2 = -c0, -d2
    d1 = 0
    for v in vecs:
        if v[1] == 0:
            d1 = math.gcd(d1, v[0])
    if d1 == 0:
        raise ValueError("vectors do not span a rank-2 lattice")
    return d1, c0 % d1, d2


@dataclass(frozen=True, slots=True)
class IdealMatrix:
    """The ideal Z*d1 + Z*(c + d2*w) of O_K."""

    d: int
    d1: int
    c: int
    d2: int

    def __post_init__(self):
        if self.d1 <= 0 or self.d2 <= 0 or not 0 <= self.c < self.d1:
            raise ValueError(f"not in Hermite normal form: {self}")
        t, n0 = _omega_poly(self.d)
        # w*d1 and w*(c + d2 w) must stay in the lattice
        if not (self.contains_coords(0, self.d1)
                and self.contains_coords(n0 * self.d2, self.c + t * self.d2)):
            raise ValueError(f"lattice is not closed under multiplication by w: {self}")

    @classmethod
    def from_generators(cls, gens: list[QuadInt]) -> "IdealMatrix":
        d = gens[0].d
        w = QuadInt(0, 1, d)
        vecs = []
        for g in gens:
            if g.d != d:
                raise FieldMismatch("generators from different fields")
            gw = g * w
            vecs += [(g.a, g.b), (gw.a, gw.b)]
        return cls(d, *_hnf(vecs))

    def norm(self) -> int:
        return self.d1 * self.d2

    def basis(self) -> tuple[QuadInt, QuadInt]:
        return QuadInt(self.d1, 0, self.d), QuadInt(self.c, self.d2, self.d)

    def contains_coords(self, x: int, y: int) -> bool:
        if y % self.d2:
            return False
        return (x - (y // self.d2) * self.c) % self.d1 == 0

    def contains(self, z: QuadInt) -> bool:
        return self.contains_coords(z.a, z.b)

    def is_unit_ideal(self) -> bool:
        return self.d1 == 1 and self.d2 == 1

    def __mul__(self, other: "IdealMatrix") -> "IdealMatrix":
        if other.d != self.d:
            raise FieldMismatch("ideals from different fields")
        return IdealMatrix.from_generators([x * y for x in self.basis() for y in other.basis()])

    def reduce_coords(self, x, y):
        """Canonical representative (0 <= x' < d1, 0 <= y' < d2); works on arrays."""
        k = y // self.d2
        return (x - k * self.c) % self.d1, y - k * self.d2

    def reduce(self, z: QuadInt) -> QuadInt:
        x, y = self.reduce_coords(z.a, z.b)
        return QuadInt(int(x), int(y), self.d)


def ideal_of(n: QuadInt) -> IdealMatrix:
    if not n:
        raise ValueError("the zero ideal has no HNF basis")
    return IdealMatrix.from_generators([n])


def ideal_gcd(I: IdealMatrix, J: IdealMatrix) -> IdealMatrix:
    """Smallest ideal containing both I and J (their sum)."""
    if I.d != J.d:
        raise FieldMismatch("ideals from different fields")
    return IdealMatrix.from_generators(list(I.basis()) + list(J.basis()))


def _canonical_associate(g: QuadInt) -> QuadInt:
    if g.is_odd():
        from .primary import primary_normalize
        return primary_normalize(g)[1]
    return max((u * g for u in field_params(g.d).units), key=lambda z: (z.a, z.b))


def principal_generator(I: IdealMatrix) -> QuadInt:
    """A generator of I, normalised to its primary associate when I is odd.

    Lattice vectors x*d1 + y*(c + d2 w) are scanned row by row over the
    box |y| <= 2*sqrt(N/|D|)/d2 + 1; on each row the norm equation is a
    quadratic in the 1-coordinate and is solved exactly.
    """
    N = I.norm()
    D = field_params(I.d).disc
    t, n0 = _omega_poly(I.d)
    ymax = math.isqrt(4 * N // -D) // I.d2 + 2
    for y in sorted(range(-ymax, ymax + 1), key=abs):
        B = y * I.d2
        disc = 4 * N + D * B * B
        if disc < 0:
            continue
        r = math.isqrt(disc)
        if r * r != disc:
            continue
        for num in (-t * B + r, -t * B - r):
            if num % 2:
                continue
            A = num // 2
            if (A - y * I.c) % I.d1 == 0:
                g = QuadInt(A, B, I.d)
                if g.norm() != N:  # pragma: no cover - algebraic identity
                    raise GeneratorSearchError("norm equation solved inconsistently")
                return _canonical_associate(g)
    raise GeneratorSearchError(f"no generator of norm {N} found for {I}")


@dataclass(frozen=True, slots=True)
class PrimeElem:
    """A prime element with its residue-field data.

    For residue degree 1, ``root`` is the image of w in Z/p, so that
    a + b*w maps to (a + b*root) mod p.
    """

    generator: QuadInt
    p: int
    residue_degree: int
    ramified: bool
    root: int | None

    @property
    def norm(self) -> int:
        return self.p ** self.residue_degree

    def residue(self, x, y):
        """Image of x + y*w in the residue field, as an integer mod p (degree 1)
        or as the rational norm mod p (degree 2).  Works on arrays."""
        if self.residue_degree == 1:
            return (x + y * self.root) % self.p
        raise TypeError("inert primes have residue field of size p^2")

    def divides_coords(self, x, y):
        if self.residue_degree == 1:
            return (x + y * self.root) % self.p == 0
        return (x % self.p == 0) & (y % self.p == 0)

    def divides(self, z: QuadInt) -> bool:
        return bool(self.divides_coords(z.a, z.b))


def _roots_mod(p: int, d: int) -> list[int]:
    t, n0 = _omega_poly(d)
    if p == 2:
        return [x for x in range(2) if (x * x - t * x - n0) % 2 == 0]
    disc = (t * t + 4 * n0) % p
    inv2 = (p + 1) // 2
    s = sqrt_mod(disc, p)
    return sorted({(t + s) * inv2 % p, (t - s) * inv2 % p})


@lru_cache(maxsize=None)
def split_prime(p: int, d: int) -> tuple[PrimeElem, ...]:
    """The prime elements above the rational prime p, sorted by generator text."""
    if p < 2:
        raise ValueError("p must be a prime >= 2")
    D = field_params(d).disc
    k = kronecker(D, p)
    if k == -1:
        return (PrimeElem(QuadInt(p, 0, d), p, 2, False, None),)
    out = []
    for rho in _roots_mod(p, d):
        ideal = IdealMatrix(d, p, (-rho) % p, 1)
        out.append(PrimeElem(principal_generator(ideal), p, 1, k == 0, rho))
    if (k == 0) != (len(out) == 1):  # pragma: no cover - guards the splitting law
        raise ArithmeticError(f"splitting of {p} in d={d} inconsistent with (D/p)")
    return tuple(sorted(out, key=lambda P: str(P.generator)))


@dataclass(frozen=True)
class ElemFactorization:
    unit: QuadInt
    factors: tuple[tuple[PrimeElem, int], ...]

    def expand(self) -> QuadInt:
        out = self.unit
        for P, e in self.factors:
            out = out * P.generator ** e
        return out


def factor_element(n: QuadInt) -> ElemFactorization:
    if not n:
        raise ValueError("cannot factor zero")
    rest = n
    factors = []
    for p in factorint(n.norm()):
        for P in split_prime(p, n.d):
            e = 0
            while True:
                try:
                    q = exact_divide(rest, P.generator)
                except NotDivisible:
                    break
                rest, e = q, e + 1
            if e:
                factors.append((P, e))
    if not rest.is_unit():  # pragma: no cover - would mean a splitting bug
        raise ArithmeticError(f"factorisation of {n} left non-unit cofactor {rest}")
    factors.sort(key=lambda fe: (fe[0].norm, str(fe[0].generator)))
    return ElemFactorization(rest, tuple(factors))


def is_squarefree(n: QuadInt) -> bool:
    return all(e == 1 for _, e in factor_element(n).factors)


def prime_divisors(n: QuadInt) -> list[PrimeElem]:
    return [P for P, _ in factor_element(n).factors]


class ResidueSystem:
    """The N(q) representatives x + y*w, 0 <= x < d1, 0 <= y < d2, of O_K/(q)."""

    def __init__(self, q: QuadInt):
        if not q:
            raise ValueError("no residue system modulo zero")
        self.q = q
        self.ideal = ideal_of(q)
        gx, gy = np.meshgrid(np.arange(self.ideal.d1, dtype=np.int64),
                             np.arange(self.ideal.d2, dtype=np.int64), indexing="ij")
        self.x = gx.ravel()
        self.y = gy.ravel()
        self._primes = prime_divisors(q)

    def __len__(self) -> int:
        return len(self.x)

    def __iter__(self) -> Iterator[QuadInt]:
        d = self.q.d
        for x, y in zip(self.x.tolist(), self.y.tolist()):
            yield QuadInt(x, y, d)

    def invertible_mask(self) -> np.ndarray:
        mask = np.ones(len(self.x), dtype=bool)
        for P in self._primes:
            mask &= ~P.divides_coords(self.x, self.y)
        return mask

    def invertible(self) -> list[QuadInt]:
        d = self.q.d
        m = self.invertible_mask()
        return [QuadInt(x, y, d) for x, y in zip(self.x[m].tolist(), self.y[m].tolist())]

    def reduce(self, z: QuadInt) -> QuadInt:
        return self.ideal.reduce(z)


def residue_system(q: QuadInt) -> ResidueSystem:
    return ResidueSystem(q)
