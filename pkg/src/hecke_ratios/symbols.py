"""Quadratic residue symbols (a/n) for odd n and the characters built from them.

``symbol`` is the reference: it factors n and evaluates each prime symbol in
the residue field.  ``symbol_fast`` avoids factorisation by reciprocity and
only runs in the five norm-Euclidean fields.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .field import EUCLIDEAN_FIELDS, NotDivisible, QuadInt, exact_divide, field_params, nearest_quotient
from .ideals import PrimeElem, factor_element, ideal_of
from .intarith import kronecker, legendre_table
from .primary import NotOddError, primary_normalize


def _require_odd(n: QuadInt):
    if not n or not n.is_odd():
        raise NotOddError(f"denominator {n} must be odd and nonzero")


@lru_cache(maxsize=4096)
def _table(p: int) -> np.ndarray:
    return legendre_table(p)


def legendre_vec(v, p: int):
    """(v/p) elementwise for integer arrays v and odd prime p."""
    v = np.asarray(v, dtype=np.int64) % p
    if p <= 1 << 20:
        return _table(p)[v].astype(np.int64)
    return np.array([0 if x == 0 else (1 if pow(int(x), (p - 1) // 2, p) == 1 else -1)
                     for x in v.ravel()], dtype=np.int64).reshape(v.shape)


def prime_symbol_coords(x, y, P: PrimeElem):
    """(x + y*w / P) for arrays x, y via the residue field of P."""
    if P.p == 2:
        raise NotOddError("symbols at primes above 2 are undefined")
    if P.residue_degree == 1:
        return legendre_vec(np.asarray(x, dtype=np.int64) + np.asarray(y, dtype=np.int64) * P.root, P.p)
    # inert: a^((p^2-1)/2) = N(a)^((p-1)/2) in F_{p^2}
    t = 1 if P.generator.d % 4 == 1 else 0
    n0 = (P.generator.d - 1) // 4 if t else P.generator.d
    x = np.asarray(x, dtype=np.int64) % P.p
    y = np.asarray(y, dtype=np.int64) % P.p
    return legendre_vec(x * x + t * x * y - n0 * y * y, P.p)


def symbol_mod_prime(a: QuadInt, P: PrimeElem) -> int:
    """(a/P) by Euler's criterion: a^((N(P)-1)/2) computed modulo P."""
    if P.p == 2:
        raise NotOddError("symbols at primes above 2 are undefined")
    I = ideal_of(P.generator)
    base, e = I.reduce(a), (P.norm - 1) // 2
    if not base:
        return 0
    acc = QuadInt(1, 0, a.d)
    while e:
        if e & 1:
            acc = I.reduce(acc * base)
        base = I.reduce(base * base)
        e >>= 1
    if acc == I.reduce(QuadInt(1, 0, a.d)):
        return 1
    if acc == I.reduce(QuadInt(-1, 0, a.d)):
        return -1
    raise ArithmeticError(f"Euler criterion gave {acc} modulo {P.generator}")  # pragma: no cover


def symbol(a: QuadInt, n: QuadInt) -> int:
    """(a/n) extended multiplicatively over the prime factorisation of odd n."""
    _require_odd(n)
    a = n._coerce(a)
    result = 1
    for P, e in factor_element(n).factors:
        s = int(prime_symbol_coords(a.a, a.b, P))
        if s == 0:
            return 0
        if e % 2:
            result *= s
    return result


def _minus_one_symbol(n: QuadInt) -> int:
    return -1 if (n.norm() - 1) // 2 % 2 else 1


def unit_symbol(u: QuadInt, n: QuadInt) -> int:
    """(u/n) for a unit u and primary n, from the supplementary laws."""
    d = n.d
    units = field_params(d).units
    squares = {v * v for v in units}
    if u in squares:
        return 1
    if -u in squares:
        return _minus_one_symbol(n)
    if d == -1:
        # (i/n) = (-1)^((1-a)/2) for primary n = a + b i; u is +-i here
        s = -1 if (1 - n.a) // 2 % 2 else 1
        return s if u == QuadInt(0, 1, d) else s * _minus_one_symbol(n)
    raise ArithmeticError(f"{u} is not a unit of d={d}")  # pragma: no cover


@lru_cache(maxsize=None)
def _two_prime_tables(d: int) -> tuple[tuple[QuadInt, dict[tuple[int, int], int]], ...]:
    """Supplementary characters (pi/n) for the even primes pi, tabulated on n mod 8.

    (pi/.) is a Hecke character of trivial infinite type whose conductor
    divides 8, so its value at a primary n depends only on n mod 8.  Each
    entry is evaluated once with the reference symbol.
    """
    from .ideals import split_prime
    out = []
    for P in split_prime(2, d):
        table = {}
        for x in range(8):
            for y in range(8):
                z = QuadInt(x, y, d)
                if z.is_odd():
                    table[(x, y)] = symbol(P.generator, z)
        out.append((P.generator, table))
    return tuple(out)


def _strip_two(r: QuadInt, n: QuadInt) -> tuple[QuadInt, int]:
    """Remove the even part of r; return (odd cofactor, product of even-prime symbols at n)."""
    sign = 1
    if field_params(n.d).two_splitting == "inert":
        two_sym = kronecker(2, n.norm())
        while r.a % 2 == 0 and r.b % 2 == 0:
            r = QuadInt(r.a // 2, r.b // 2, r.d)
            sign *= two_sym
        return r, sign
    key = (n.a % 8, n.b % 8)
    for pi, table in _two_prime_tables(n.d):
        while True:
            try:
                r = exact_divide(r, pi)
            except NotDivisible:
                break
            sign *= table[key]
    return r, sign


def symbol_fast(a: QuadInt, n: QuadInt) -> int:
    """(a/n) without factoring n, via the reciprocity law for primary elements.

    Each step reduces a modulo n (strict norm descent in a norm-Euclidean
    field), strips the even part and the unit using the supplementary laws,
    and flips with the sign (-1)^((N(m)-1)/2 * (N(n)-1)/2).
    """
    if n.d not in EUCLIDEAN_FIELDS:
        raise ValueError(f"symbol_fast needs a norm-Euclidean field, got d={n.d}")
    _require_odd(n)
    a = n._coerce(a)
    _, n = primary_normalize(n)
    result = 1
    while not n.is_unit():
        r = a - nearest_quotient(a, n) * n
        if not r:
            return 0
        r, s = _strip_two(r, n)
        u, m = primary_normalize(r)
        # (r/n) = (u^-1/n)(m/n) and unit symbols are +-1
        result *= s * unit_symbol(u, n)
        if ((m.norm() - 1) // 2) * ((n.norm() - 1) // 2) % 2:
            result = -result
        a, n = n, m
    return result


def chi_eval(kind: str, m: QuadInt, x: QuadInt) -> int:
    """``upper``: chi^(m)(x) = (m/x);  ``lower``: chi_m(x) = (x/m)."""
    if kind == "upper":
        return symbol(m, x)
    if kind == "lower":
        return symbol(x, m)
    raise ValueError(f"kind must be 'upper' or 'lower', not {kind!r}")


def chi_conductor(c: QuadInt, x: QuadInt) -> int:
    """chi^(c_K c)(x) = (c_K c / x) for odd x."""
    return symbol(field_params(c.d).c_K * c, x)


def lower_char_values(n: QuadInt, x, y) -> np.ndarray:
    """(x + y*w / n) over arrays, for odd n."""
    _require_odd(n)
    out = np.ones(np.broadcast(np.asarray(x), np.asarray(y)).shape, dtype=np.int64)
    for P, e in factor_element(n).factors:
        s = prime_symbol_coords(x, y, P)
        out *= s if e % 2 else s * s
    return out
