"""L(s, chi^(c_K c)): Dirichlet coefficients, theta-integral evaluation,
derivatives and the functional-equation residual.

With Q = sqrt(|D_K| N(c_K c)) / (2 pi) and theta(u) = sum r(n) exp(-n u / Q),

    Q^s Gamma(s) L(s) = int_A^inf theta(u) u^(s-1) du + int_(1/A)^inf theta(u) u^(-s) du

for every A > 0, because the root number is 1.  ``l_value`` uses A = 1.
``fe_residual`` compares the A = 1.25 evaluations at s and 1 - s, which only
agree if the functional equation really holds.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .field import QuadInt, field_params, _omega_poly
from .ideals import _roots_mod, is_squarefree
from .intarith import kronecker, primes_upto
from .primary import NotOddError, is_primary
from .special import digamma, gamma_fn

log = logging.getLogger(__name__)

SPLIT, INERT, RAMIFIED = 0, 1, 2
FE_SPLIT_POINT = 1.25


class LZeroError(ArithmeticError):
    """|L(s)| is within the error budget of zero, so L'/L is meaningless."""


# -- coefficients ------------------------------------------------------------

@dataclass(frozen=True)
class _PrimeData:
    primes: np.ndarray
    kind: np.ndarray
    root1: np.ndarray
    root2: np.ndarray


_prime_cache: dict[int, tuple[int, _PrimeData]] = {}


def _prime_data(d: int, N: int) -> _PrimeData:
    """Splitting type and roots of w mod p for all odd p <= N (cached per field)."""
    bound, cached = _prime_cache.get(d, (0, None))
    if bound >= N:
        k = np.searchsorted(cached.primes, N, side="right")
        return _PrimeData(cached.primes[:k], cached.kind[:k], cached.root1[:k], cached.root2[:k])
    M = max(N, 1024)
    ps = primes_upto(M)
    ps = ps[ps > 2].astype(np.int64)
    D = field_params(d).disc
    kind = np.empty(ps.size, dtype=np.int8)
    r1 = np.zeros(ps.size, dtype=np.int64)
    r2 = np.zeros(ps.size, dtype=np.int64)
    for i, p in enumerate(ps.tolist()):
        k = kronecker(D, p)
        if k == -1:
            kind[i] = INERT
            continue
        roots = _roots_mod(p, d)
        kind[i] = RAMIFIED if k == 0 else SPLIT
        r1[i] = roots[0]
        r2[i] = roots[-1]
    _prime_cache[d] = (M, _PrimeData(ps, kind, r1, r2))
    return _prime_data(d, N)


@dataclass(frozen=True)
class _Layout:
    """Prime-power decomposition n = pk[n] * rest[n] (pk the power of the
    smallest prime), grouped into layers by number of distinct prime factors."""

    size: int
    pk: np.ndarray
    rest: np.ndarray
    layers: tuple[np.ndarray, ...]
    pp_index: np.ndarray  # prime powers p^k <= size (p odd)
    pp_prime: np.ndarray
    pp_exp: np.ndarray


@lru_cache(maxsize=8)
def _layout(size: int) -> _Layout:
    n = np.arange(size + 1, dtype=np.int64)
    spf = np.zeros(size + 1, dtype=np.int64)
    for p in primes_upto(math.isqrt(size)).tolist():
        block = spf[p * p::p]
        block[block == 0] = p
    spf[spf == 0] = n[spf == 0]
    pk = spf.copy()
    q = np.where(n >= 2, spf * spf, 0)
    while True:
        ok = (q <= size) & (q > 0)
        ok[ok] = n[ok] % q[ok] == 0
        if not ok.any():
            break
        pk[ok] = q[ok]
        q = np.where(ok, q * spf, 0)
    rest = np.where(n > 0, n // np.maximum(pk, 1), 0)
    omega = np.zeros(size + 1, dtype=np.int64)
    for p in primes_upto(size).tolist():
        omega[p::p] += 1
    layers = tuple(np.nonzero(omega == k)[0] for k in range(1, int(omega.max()) + 1)) if size >= 2 else ()
    isppow = (pk == n) & (n >= 2) & (spf != 2)
    pp_index = np.nonzero(isppow)[0]
    pp_prime = spf[pp_index]
    pp_exp = np.rint(np.log(pp_index) / np.log(pp_prime)).astype(np.int64)
    return _Layout(size, pk, rest, layers, pp_index, pp_prime, pp_exp)


def powmod_vec(base: np.ndarray, exp: np.ndarray, mod: np.ndarray) -> np.ndarray:
    """Elementwise base^exp mod m for int64 arrays with m < 2^31."""
    base = base % mod
    exp = exp.copy()
    acc = np.ones_like(base)
    while exp.any():
        odd = (exp & 1).astype(bool)
        acc[odd] = acc[odd] * base[odd] % mod[odd]
        base = base * base % mod
        exp >>= 1
    return acc


def _legendre_vec(v: np.ndarray, p: np.ndarray) -> np.ndarray:
    e = powmod_vec(v % p, (p - 1) // 2, p)
    return np.where(v % p == 0, 0, np.where(e == 1, 1, -1)).astype(np.int64)


@dataclass(frozen=True)
class CoeffTable:
    """r[n] = sum over ideals of norm n of chi^(c_K c)(ideal), 0 <= n <= N (r[0] = 0)."""

    c: QuadInt
    conductor_norm: int
    r: np.ndarray

    def __len__(self) -> int:
        return len(self.r) - 1


def _check_c(c: QuadInt):
    if not c.is_odd():
        raise NotOddError(f"{c} is not odd")
    if not is_primary(c):
        raise ValueError(f"{c} is not primary")
    if not is_squarefree(c):
        raise ValueError(f"{c} is not square-free")


def coeff_table(c: QuadInt, N: int, check: bool = True) -> CoeffTable:
    """Coefficients built multiplicatively from chi at the prime ideals above each p <= N."""
    if check:
        _check_c(c)
    if N < 1:
        raise ValueError("N must be at least 1")
    d = c.d
    m = field_params(d).c_K * c
    size = max(1024, 1 << (N - 1).bit_length())
    lay = _layout(size)
    pd = _prime_data(d, size)
    p = pd.primes
    A, B = m.a, m.b
    t, n0 = _omega_poly(d)
    chi1 = _legendre_vec(A % p + (B % p) * pd.root1, p)
    chi2 = _legendre_vec(A % p + (B % p) * pd.root2, p)
    normm = m.norm()
    chi_inert = _legendre_vec(np.array([normm % q for q in p.tolist()], dtype=np.int64), p)
    # local coefficients at the prime powers p^k
    idx = np.searchsorted(p, lay.pp_prime)
    k = lay.pp_exp
    kd = pd.kind[idx]
    x1, x2, xi = chi1[idx], chi2[idx], chi_inert[idx]
    even = (k % 2 == 0)
    loc = np.zeros(size + 1, dtype=np.int64)
    v = np.zeros(k.size, dtype=np.int64)
    s = kd == SPLIT
    same = s & (x1 == x2)
    v[same] = (k[same] + 1) * x1[same] ** k[same]
    opp = s & (x1 == -x2) & (x1 != 0)
    v[opp] = np.where(even[opp], x2[opp] ** k[opp], 0)
    one0 = s & (x1 != x2) & ((x1 == 0) | (x2 == 0))
    v[one0] = (x1[one0] + x2[one0]) ** k[one0]
    ine = kd == INERT
    v[ine] = np.where(even[ine], xi[ine] ** (k[ine] // 2), 0)
    ram = kd == RAMIFIED
    v[ram] = x1[ram] ** k[ram]
    loc[lay.pp_index] = v
    r = np.zeros(size + 1, dtype=np.int64)
    r[1] = 1
    for layer in lay.layers:
        r[layer] = loc[lay.pk[layer]] * r[lay.rest[layer]]
    return CoeffTable(c, normm, r[:N + 1].copy())


def coeff_table_bruteforce(c: QuadInt, N: int) -> np.ndarray:
    """Oracle: enumerate elements of norm <= N, one count per ideal, chi by the reference symbol."""
    from .symbols import symbol
    d = c.d
    fp = field_params(d)
    m = fp.c_K * c
    t, n0 = _omega_poly(d)
    r = np.zeros(N + 1, dtype=np.int64)
    bmax = math.isqrt(4 * N // abs(fp.disc)) + 2
    for b in range(-bmax, bmax + 1):
        # N(a + b w) = (a + t b / 2)^2 + (|D| / 4) b^2
        span = math.isqrt(N) + 2
        a0 = -(t * b) // 2
        for a in range(a0 - span, a0 + span + 1):
            z = QuadInt(a, b, d)
            nz = z.norm()
            if 0 < nz <= N and z.is_odd():
                r[nz] += symbol(m, z)
    assert np.all(r % fp.num_units == 0)
    return r // fp.num_units


# -- theta integral ----------------------------------------------------------

def conductor_Q(c: QuadInt) -> float:
    fp = field_params(c.d)
    return math.sqrt(abs(fp.disc) * fp.norm_c_K * c.norm()) / (2 * math.pi)


def _theta_at(r: np.ndarray, Q: float, u: float, L: float) -> float:
    nmax = min(len(r) - 1, int(math.ceil(Q * L / u)) + 1)
    if nmax < 1:
        return 0.0
    n = np.arange(1, nmax + 1, dtype=float)
    return float(np.dot(r[1:nmax + 1], np.exp(-n * (u / Q))))


def theta_value(c: QuadInt, u: float, eps: float = 1e-12) -> float:
    """theta(u) = sum r(n) exp(-n u / Q), truncated where the tail is below eps."""
    if u <= 0:
        raise ValueError("u must be positive")
    Q = conductor_Q(c)
    L = math.log(1 / eps) + 5
    nmax = int(math.ceil(Q * L * max(1.0, u) / u)) + 1
    tab = coeff_table(c, nmax)
    return _theta_at(tab.r, Q, u, L)


@dataclass(frozen=True)
class LValue:
    s: complex
    value: complex
    abs_error_estimate: float
    terms_used: int


class HeckeL:
    """Theta values of one L(s, chi^(c_K c)) at fixed quadrature nodes, reusable for any s.

    Nodes are composite Gauss-Legendre in t = ln u on panels of width
    ``panel``; every panel also carries a rule of half the order whose
    disagreement is the quadrature error estimate.
    """

    def __init__(self, c: QuadInt, eps: float = 1e-9, nodes: int = 16, panel: float = 0.25,
                 split_point: float = FE_SPLIT_POINT, check: bool = True):
        if check:
            _check_c(c)
        self.c = c
        self.eps = eps
        self.Q = Q = conductor_Q(c)
        # theta truncation well below eps: the integrals weight theta by up to u^2
        self.L = L = max(36.0, math.log(1 / eps) + 14)
        u_max = Q * L * 1.2 + 10
        t_lo, t_hi = -math.log(split_point), math.log(u_max)
        self.t_split = math.log(split_point)
        breaks = [t_lo, 0.0, self.t_split]
        t = self.t_split
        while t < t_hi:
            t = min(t + panel, t_hi)
            breaks.append(t)
        self.breaks = np.array(breaks)
        xg, wg = np.polynomial.legendre.leggauss(nodes)
        xh, wh = np.polynomial.legendre.leggauss(max(nodes // 2, 2))
        lo, hi = self.breaks[:-1, None], self.breaks[1:, None]
        half, mid = (hi - lo) / 2, (hi + lo) / 2
        self.t_main = (mid + half * xg).ravel()
        self.w_main = (half * wg).ravel()
        self.t_chk = (mid + half * xh).ravel()
        self.w_chk = (half * wh).ravel()
        self.panel_main = np.repeat(np.arange(len(breaks) - 1), nodes)
        self.panel_chk = np.repeat(np.arange(len(breaks) - 1), len(xh))
        nmax = int(math.ceil(Q * L / math.exp(t_lo))) + 1
        self.table = coeff_table(c, nmax, check=False)
        r = self.table.r
        self.terms_used = nmax
        self.theta_main = np.array([_theta_at(r, Q, math.exp(x), L) for x in self.t_main])
        self.theta_chk = np.array([_theta_at(r, Q, math.exp(x), L) for x in self.t_chk])
        # bound on the neglected part of theta(u), relative to r(1) = 1 scale
        self.trunc = math.exp(-L) * 4 * (Q * L) ** 0.5

    def _panels_from(self, t0: float, which: str) -> np.ndarray:
        tt = self.t_main if which == "main" else self.t_chk
        return tt >= t0 - 1e-15

    def _integral(self, s: complex, A_log: float, which: str = "main", logw: bool = False):
        """int_A^inf theta u^(s-1) du + int_(1/A)^inf theta u^(-s) du in t = ln u."""
        if which == "main":
            t, w, th = self.t_main, self.w_main, self.theta_main
        else:
            t, w, th = self.t_chk, self.w_chk, self.theta_chk
        m1 = t >= A_log - 1e-15
        m2 = t >= -A_log - 1e-15
        f1 = th[m1] * np.exp(s * t[m1])
        f2 = th[m2] * np.exp((1 - s) * t[m2])
        if logw:
            f1 = f1 * t[m1]
            f2 = -f2 * t[m2]
        return complex(np.dot(w[m1], f1) + np.dot(w[m2], f2))

    def _trunc_budget(self, s: complex) -> float:
        t = self.t_main
        w = self.w_main
        return self.trunc * float(np.dot(w, np.exp(s.real * t) + np.exp((1 - s.real) * t)))

    def completed(self, s: complex, A_log: float = 0.0) -> tuple[complex, float]:
        s = complex(s)
        I = self._integral(s, A_log)
        Ic = self._integral(s, A_log, "check")
        return I, abs(I - Ic) + self._trunc_budget(s)

    def value(self, s: complex) -> LValue:
        s = complex(s)
        g = gamma_fn(s)
        I, err = self.completed(s)
        scale = cmath.exp(-s * math.log(self.Q)) / g
        return LValue(s, I * scale, abs(scale) * err, self.terms_used)

    def derivative(self, s: complex, h: float = 1e-3) -> tuple[complex, float]:
        """Central difference at h and h/2 with one Richardson step."""
        s = complex(s)

        def D(step):
            return (self.value(s + step).value - self.value(s - step).value) / (2 * step)

        d1, d2 = D(h), D(h / 2)
        return (4 * d2 - d1) / 3, abs(d2 - d1) / 3 + self.value(s).abs_error_estimate / h

    def derivative_analytic(self, s: complex) -> complex:
        """Oracle: d/ds of Q^-s Gamma(s)^-1 I(s) with the ln u weighted integral."""
        s = complex(s)
        I = self._integral(s, 0.0)
        J = self._integral(s, 0.0, logw=True)
        scale = cmath.exp(-s * math.log(self.Q)) / gamma_fn(s)
        return scale * (J - (math.log(self.Q) + digamma(s)) * I)

    def log_derivative(self, s: complex) -> complex:
        v = self.value(s)
        if abs(v.value) < 10 * v.abs_error_estimate:
            raise LZeroError(f"L({s}) = {v.value} is numerically zero for c = {self.c}")
        return self.derivative(s)[0] / v.value

    def fe_residual(self, s: complex) -> float:
        s = complex(s)
        a = self.t_split
        lam_s = self._integral(s, a)
        lam_r = self._integral(1 - s, a)
        return abs(lam_s - lam_r) / (abs(lam_s) + abs(lam_r) + 1e-300)


@lru_cache(maxsize=256)
def _hecke(c: QuadInt, eps: float) -> HeckeL:
    return HeckeL(c, eps)


def l_value(s: complex, c: QuadInt, eps: float = 1e-9) -> LValue:
    s = complex(s)
    if s.imag == 0 and s.real <= 0 and s.real == math.floor(s.real):
        raise ValueError(f"Gamma has a pole at s = {s.real:g}")
    return _hecke(c, eps).value(s)


def l_derivative(s: complex, c: QuadInt, eps: float = 1e-9) -> complex:
    return _hecke(c, eps).derivative(complex(s))[0]


def fe_residual(s: complex, c: QuadInt, eps: float = 1e-9) -> float:
    return _hecke(c, eps).fe_residual(complex(s))


def _smooth_cutoff(x: np.ndarray) -> np.ndarray:
    """1 on [0, 1], 0 on [2, inf), C-infinity in between."""
    def psi(y):
        out = np.zeros_like(y)
        pos = y > 0
        out[pos] = np.exp(-1.0 / y[pos])
        return out
    a, b = psi(2 - x), psi(x - 1)
    return a / (a + b)


def l_value_series(s: complex, c: QuadInt, cutoff_factor: float = 3200.0) -> complex:
    """Oracle for Re(s) > 1: sum r(n) n^-s phi(n / M) with a smooth cutoff phi and
    M = cutoff_factor * Q.  Uses neither the functional equation nor theta."""
    s = complex(s)
    M = cutoff_factor * conductor_Q(c)
    N = int(2 * M) + 1
    r = coeff_table(c, N).r
    n = np.arange(1, N + 1, dtype=float)
    nz = r[1:] != 0
    w = _smooth_cutoff(n[nz] / M)
    return complex(np.sum(r[1:][nz] * w * np.exp(-s * np.log(n[nz]))))
