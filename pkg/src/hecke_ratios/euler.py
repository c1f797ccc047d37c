"""Arithmetic factors of the main terms: a(n), P(w, z), P(w), the prime
log-sum and the logarithmic derivative of zeta_K^(2).

Products over odd prime ideals are evaluated as exp(sum of log-factors).
Primes of norm <= B are summed directly.  Beyond B each log-factor is
expanded into monomials N^-e with e = i + a*w + b*z, and the sum of N^-e
over odd prime ideals of norm > B is obtained from the prime zeta function

    P_K(e) = sum_k mu(k)/k log zeta_K^(2)(k e)

minus the primes below B.  Monomials with Re(e) above ``E_MAX`` are dropped
and their share is bounded; B starts at ``min_bound`` and is doubled until
that bound is below rel_eps.
"""

from __future__ import annotations

import cmath
import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .field import QuadInt
from .hecke_l import INERT, RAMIFIED, SPLIT, _prime_data
from .ideals import prime_divisors
from .special import dedekind_zeta

E_MAX = 4.0
MAX_BOUND = 1 << 22


class DivergentRange(ValueError):
    pass


@dataclass(frozen=True)
class PrimeNormStream:
    """Norms of the odd prime ideals with N <= bound, with multiplicity."""

    d: int
    bound: int
    norms: np.ndarray
    mult: np.ndarray

    def __len__(self) -> int:
        return len(self.norms)

    def entries(self) -> list[tuple[int, int]]:
        return list(zip(self.norms.tolist(), self.mult.tolist()))

    def count(self) -> int:
        return int(self.mult.sum())


@lru_cache(maxsize=32)
def prime_norm_stream(d: int, bound: int) -> PrimeNormStream:
    pd = _prime_data(d, bound)
    p = pd.primes
    norms = np.where(pd.kind == INERT, p * p, p)
    mult = np.where(pd.kind == SPLIT, 2, 1)
    keep = norms <= bound
    norms, mult = norms[keep], mult[keep]
    order = np.argsort(norms, kind="stable")
    return PrimeNormStream(d, bound, norms[order].astype(np.int64), mult[order].astype(np.int64))


def a_factor(n: QuadInt) -> Fraction:
    """prod over prime ideals dividing n of (1 + 1/N)^-1."""
    if not n:
        raise ValueError("a(0) is undefined")
    out = Fraction(1)
    for P in prime_divisors(n):
        out *= Fraction(P.norm, P.norm + 1)
    return out


# -- prime zeta --------------------------------------------------------------

def _mobius(k: int) -> int:
    out, m, p = 1, k, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            out = -out
        p += 1
    return -out if m > 1 else out


def log_zeta2(s: complex, d: int) -> complex:
    """log zeta_K^(2)(s) for Re(s) > 1."""
    s = complex(s)
    if s.real > 25:
        st = prime_norm_stream(d, 1000)
        return complex(-np.sum(st.mult * np.log1p(-np.exp(-s * np.log(st.norms.astype(float))))))
    return cmath.log(dedekind_zeta(s, d, remove_two=True))


def _log_zeta2_deriv(s: complex, d: int, h: float = 1e-4) -> complex:
    def D(step):
        return (log_zeta2(s + step, d) - log_zeta2(s - step, d)) / (2 * step)
    return (4 * D(h / 2) - D(h)) / 3


@lru_cache(maxsize=4096)
def prime_zeta_odd(e: complex, d: int, deriv: bool = False) -> complex:
    """sum over odd prime ideals of N^-e (or its e-derivative) for Re(e) > 1."""
    e = complex(e)
    if e.real <= 1:
        raise DivergentRange(f"prime zeta needs Re(e) > 1, got {e}")
    total = 0j
    k = 1
    # smallest odd prime norm is 3, so term k is below 3^(-k Re e)
    while k * e.real * math.log(3) < 45:
        mu = _mobius(k)
        if mu:
            if deriv:
                total += mu * _log_zeta2_deriv(k * e, d)
            else:
                total += mu / k * log_zeta2(k * e, d)
        k += 1
    return total


def _tail_sum(e: complex, st: PrimeNormStream, log_weight: bool = False) -> complex:
    """sum over odd prime ideals with N > bound of N^-e (times log N if asked)."""
    logs = np.log(st.norms.astype(float))
    head = st.mult * np.exp(-e * logs)
    if log_weight:
        return -prime_zeta_odd(e, st.d, True) - complex(np.sum(head * logs))
    return prime_zeta_odd(e, st.d) - complex(np.sum(head))


# -- monomial algebra ----------------------------------------------------------

Mono = dict  # (i, a, b) -> coefficient


def _re(key, w, z):
    i, a, b = key
    return i + a * w.real + b * (z.real if z is not None else 0.0)


def _g_monomials(w: complex, z: complex | None, emax: float) -> Mono:
    """(1 - N^(z-w)) / ((N+1)(N^(z+w) - 1)) as monomials N^-(i + a w + b z);
    ``z is None`` gives the z -> infinity limit -1/((N+1) N^(2w))."""
    out: Mono = defaultdict(float)
    i = 1
    while True:
        added = False
        sign = 1 if i % 2 else -1
        j = 1
        while True:
            k1 = (i, j, j)
            k2 = (i, j + 1, j - 1)
            r2 = _re(k2, w, z) if (z is not None or j == 1) else math.inf
            r1 = _re(k1, w, z) if z is not None else math.inf
            if min(r1, r2) > emax:
                break
            if r1 <= emax:
                out[k1] += sign
                added = True
            if r2 <= emax:
                out[k2] -= sign
                added = True
            if z is None:
                break
            j += 1
        if not added and i > emax:
            break
        i += 1
    return {k: v for k, v in out.items() if v}


def _mul(p: Mono, q: Mono, w, z, emax) -> Mono:
    out: Mono = defaultdict(float)
    for k1, c1 in p.items():
        for k2, c2 in q.items():
            k = (k1[0] + k2[0], k1[1] + k2[1], k1[2] + k2[2])
            if _re(k, w, z) <= emax:
                out[k] += c1 * c2
    return {k: v for k, v in out.items() if v}


def _log1p_monomials(g: Mono, w, z, emax) -> Mono:
    out: Mono = defaultdict(float)
    power = dict(g)
    m = 1
    while power:
        for k, v in power.items():
            out[k] += (1 if m % 2 else -1) * v / m
        power = _mul(power, g, w, z, emax)
        m += 1
    return {k: v for k, v in out.items() if v}


def _exponent(key, w, z) -> complex:
    i, a, b = key
    return i + a * w + (b * z if b else 0)


@dataclass(frozen=True)
class EulerResult:
    value: complex
    log_value: complex
    bound: int
    tail_budget: float


def _product(w: complex, z: complex | None, d: int, rel_eps: float, direct, min_bound: int = 1024) -> EulerResult:
    mono_all = _log1p_monomials(_g_monomials(w, z, E_MAX + 2), w, z, E_MAX + 2)
    kept = {k: v for k, v in mono_all.items() if _re(k, w, z) <= E_MAX}
    dropped = {k: v for k, v in mono_all.items() if _re(k, w, z) > E_MAX}
    B = min_bound
    while True:
        st = prime_norm_stream(d, B)
        N = st.norms.astype(float)
        head = complex(np.sum(st.mult * np.log1p(direct(N))))
        tail = sum(v * _tail_sum(_exponent(k, w, z), st) for k, v in kept.items())
        # dropped monomials: sum over N > B of 2 N^-e <= 2 B^(1-e) / (e - 1), doubled for safety
        budget = sum(abs(v) * 4 * B ** (1 - _re(k, w, z)) / (_re(k, w, z) - 1) for k, v in dropped.items())
        logv = head + tail
        if budget <= rel_eps * max(1.0, abs(logv)) * 0.5 or B >= MAX_BOUND:
            break
        B *= 2
    if budget > rel_eps:
        raise ArithmeticError(f"Euler product tail budget {budget:.3g} above {rel_eps}")
    return EulerResult(cmath.exp(logv), logv, B, budget)


def euler_P2(w: complex, z: complex, d: int, rel_eps: float = 1e-10, full: bool = False,
             min_bound: int = 1024):
    """P(w, z) = prod over odd prime ideals of 1 + (1 - N^(z-w)) / ((N+1)(N^(z+w) - 1))."""
    w, z = complex(w), complex(z)
    if (w + z).real <= 0 or w.real <= 0:
        raise DivergentRange(f"P(w, z) needs Re(w) > 0 and Re(w+z) > 0 here, got w={w}, z={z}")
    if w == z:
        res = EulerResult(1 + 0j, 0j, 0, 0.0)
        return res if full else res.value

    def direct(N):
        return (1 - np.exp((z - w) * np.log(N))) / ((N + 1) * np.expm1((z + w) * np.log(N)))

    res = _product(w, z, d, rel_eps, direct, min_bound)
    return res if full else res.value


def euler_P1(w: complex, d: int, rel_eps: float = 1e-10, full: bool = False, min_bound: int = 1024):
    """P(w) = prod over odd prime ideals of 1 - 1 / ((N+1) N^(2w))."""
    w = complex(w)
    if w.real <= 0:
        raise DivergentRange(f"P(w) needs Re(w) > 0, got {w}")

    def direct(N):
        return -1 / ((N + 1) * np.exp(2 * w * np.log(N)))

    res = _product(w, None, d, rel_eps, direct, min_bound)
    return res if full else res.value


def prime_log_sum(r: complex, d: int, rel_eps: float = 1e-10, full: bool = False,
                  min_bound: int = 1024):
    """sum over odd prime ideals of log N / (N (N^(1+2r) - 1))."""
    r = complex(r)
    if r.real <= -0.25:
        raise DivergentRange(f"prime_log_sum needs Re(r) > -1/4, got {r}")
    step = 1 + 2 * r
    terms = []
    j = 1
    while 1 + j * step.real <= E_MAX:
        terms.append(1 + j * step)
        j += 1
    e_drop = 1 + j * step.real
    B = min_bound
    while True:
        st = prime_norm_stream(d, B)
        N = st.norms.astype(float)
        logs = np.log(N)
        head = complex(np.sum(st.mult * logs / (N * np.expm1(step * logs))))
        tail = sum(_tail_sum(e, st, log_weight=True) for e in terms)
        # the rest is a geometric series in N^-(1+2r) starting at N^-e_drop
        ratio = B ** -step.real
        budget = 4 * (math.log(B) / (e_drop - 1) + 1 / (e_drop - 1) ** 2) * B ** (1 - e_drop) / (1 - ratio)
        total = head + tail
        if budget <= rel_eps * max(1.0, abs(total)) * 0.5 or B >= MAX_BOUND:
            break
        B *= 2
    res = EulerResult(total, cmath.log(total) if total else 0j, B, budget)
    return res if full else res.value


def zetaK2_logderiv(s: complex, d: int) -> complex:
    """(zeta_K^(2))'(s) / zeta_K^(2)(s) by a Richardson central difference of log zeta_K^(2)."""
    s = complex(s)
    if abs(s - 1) < 1e-6:
        raise DivergentRange("too close to the pole at s = 1")
    h = min(1e-4, abs(s - 1) / 10)

    def D(step):
        return (cmath.log(dedekind_zeta(s + step, d, True)) - cmath.log(dedekind_zeta(s - step, d, True))) / (2 * step)

    val = (4 * D(h / 2) - D(h)) / 3
    if not math.isfinite(abs(val)):
        raise ArithmeticError(f"log-derivative of zeta_K^(2) not finite at {s}")
    return val
