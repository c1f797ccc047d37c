"""Additive character, brute-force Gauss sums and their closed forms."""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from typing import Callable, Union

import numpy as np

from .field import QuadInt, QuadRat, field_params, _omega_poly
from .ideals import is_squarefree, residue_system
from .primary import NotOddError, is_primary
from .symbols import lower_char_values, symbol

CharSpec = Union[tuple, Callable[[QuadInt], int]]


def additive_char(z: QuadRat) -> complex:
    """e~_K(z) = exp(2 pi i Trace(z / sqrt(D_K))), with sqrt(D_K) = i sqrt|D_K|.

    The trace is an exact rational (the w-coordinate of z) reduced mod 1
    before the exponential is taken.
    """
    t = z.trace_over_sqrt_disc() % 1
    return cmath.exp(2j * math.pi * float(t)) if t else 1.0 + 0j


def _phases(k: QuadInt, q: QuadInt, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    # w-coordinate of k*x/q = (k conj(q) x)/N(q); numerators reduced mod N(q)
    t, _ = _omega_poly(q.d)
    m = k * q.conj()
    N = q.norm()
    num = (m.a % N) * y + (m.b % N) * x + ((t * m.b) % N) * y
    return np.exp(2j * np.pi * (num % N) / N)


def _char_values(chi: CharSpec, q: QuadInt, rs) -> np.ndarray:
    if callable(chi):
        return np.array([chi(z) for z in rs], dtype=np.int64)
    kind = chi[0]
    if kind == "lower":
        return lower_char_values(chi[1], rs.x, rs.y)
    if kind == "principal":
        return rs.invertible_mask().astype(np.int64)
    if kind == "conductor":
        m = field_params(q.d).c_K * chi[1]
        mask = rs.invertible_mask()
        vals = np.zeros(len(rs), dtype=np.int64)
        for i in np.nonzero(mask)[0]:
            vals[i] = symbol(m, QuadInt(int(rs.x[i]), int(rs.y[i]), q.d))
        return vals
    raise ValueError(f"unknown character spec {chi!r}")


def gauss_sum_bruteforce(k: QuadInt, chi: CharSpec, q: QuadInt) -> complex:
    """Sum over x mod q of chi(x) e~_K(k x / q).

    ``chi`` is a callable on residues or one of ``("lower", n)`` for
    chi_n = (./n), ``("conductor", c)`` for chi^(c_K c), ``("principal",)``.
    """
    if not q:
        raise ValueError("modulus must be nonzero")
    rs = residue_system(q)
    vals = _char_values(chi, q, rs)
    nz = vals != 0
    return complex(np.sum(vals[nz] * _phases(k, q, rs.x[nz], rs.y[nz])))


def gauss_sum_closed(n: QuadInt) -> complex:
    """g_K(chi_n) for primary, odd, square-free n."""
    if not n.is_odd() or not is_primary(n):
        raise NotOddError(f"{n} must be odd and primary")
    if not is_squarefree(n):
        raise ValueError(f"{n} is not square-free")
    N = n.norm()
    root = math.sqrt(N)
    if N % 4 == 1:
        return complex(root, 0)
    return complex(0, root) if n.d in (-2, -7) else complex(0, -root)


def root_number_check(c: QuadInt) -> complex:
    """Brute-force g_K(chi^(c_K c)); expected to equal sqrt(N(c_K c))."""
    if not c.is_odd() or not is_primary(c) or not is_squarefree(c):
        raise ValueError(f"{c} must be odd, primary and square-free")
    q = field_params(c.d).c_K * c
    return gauss_sum_bruteforce(QuadInt(1, 0, c.d), ("conductor", c), q)


def trace_exponent(k: QuadInt, x: QuadInt, q: QuadInt) -> Fraction:
    """Trace(k x / (q sqrt(D_K))) mod 1 as an exact rational."""
    return QuadRat.quotient(k * x, q).trace_over_sqrt_disc() % 1
