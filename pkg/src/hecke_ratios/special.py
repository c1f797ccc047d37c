"""Gamma, Hurwitz zeta, rational Dirichlet L-functions, Dedekind zeta and the
smooth weights with their Mellin transforms."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import special as sp

from .field import field_params
from .intarith import kronecker

# B_2, B_4, ..., B_40
_BERNOULLI = [float(sp.bernoulli(2 * k)[-1]) for k in range(1, 21)]


def gamma_fn(s: complex) -> complex:
    """Gamma(s) for complex s; scipy's complex gamma (reflection built in)."""
    s = complex(s)
    if s.imag == 0 and s.real <= 0 and s.real == math.floor(s.real):
        raise ValueError(f"Gamma has a pole at {s.real:g}")
    if s.imag == 0:
        # the real routine is a few ulps more accurate on the axis
        return complex(sp.gamma(s.real))
    return complex(sp.gamma(s))


def digamma(s: complex) -> complex:
    return complex(sp.psi(complex(s)))


def hurwitz_zeta(s: complex, a, tol: float = 1e-15):
    """zeta(s, a) by Euler-Maclaurin summation; ``a`` may be an array in (0, 1].

    The remainder after the last Bernoulli term is bounded by the modulus of
    the first omitted term times |s + 2K + 1| / (Re s + 2K + 1), and the cut
    point M is raised until that bound falls below ``tol`` relative.
    """
    s = complex(s)
    if s == 1:
        raise ValueError("zeta(s, a) has a pole at s = 1")
    a_arr = np.atleast_1d(np.asarray(a, dtype=float))
    sigma = s.real
    K = len(_BERNOULLI) - 1
    M = int(max(10, abs(s) + 10))
    while True:
        n = np.arange(M, dtype=float)
        base = n[None, :] + a_arr[:, None]
        head = np.exp(-s * np.log(base)).sum(axis=1)
        x = M + a_arr
        logx = np.log(x)
        total = head + np.exp((1 - s) * logx) / (s - 1) + 0.5 * np.exp(-s * logx)
        rising = s  # s (s+1) ... (s+2k-2)
        for k in range(1, K + 1):
            term = _BERNOULLI[k - 1] / math.factorial(2 * k) * rising * np.exp((-s - 2 * k + 1) * logx)
            total = total + term
            rising *= (s + 2 * k - 1) * (s + 2 * k)
        nxt = abs(_BERNOULLI[K] / math.factorial(2 * K + 2) * rising) * np.exp(
            (-sigma - 2 * K - 1) * logx)
        bound = nxt * abs(s + 2 * K + 1) / max(sigma + 2 * K + 1, 1.0)
        if np.all(bound <= tol * np.abs(total)) or M > 10**5:
            break
        M *= 2
    if np.ndim(a) == 0:
        return complex(total[0])
    return total


def riemann_zeta(s: complex) -> complex:
    return hurwitz_zeta(s, 1.0)


def dirichlet_l_rational(s: complex, D: int) -> complex:
    """L(s, (D/.)) = |D|^-s sum_{a=1}^{|D|} (D/a) zeta(s, a/|D|)."""
    s = complex(s)
    q = abs(D)
    if q == 1:
        return riemann_zeta(s)
    if s.real > 30:
        # direct series: the tail beyond n = 60 is below 60^-30
        n = np.arange(1, 61)
        chi = np.array([kronecker(D, int(k)) for k in n], dtype=float)
        return complex(np.sum(chi * np.exp(-s * np.log(n))))
    a = np.arange(1, q + 1)
    chi = np.array([kronecker(D, int(k)) for k in a], dtype=float)
    nz = chi != 0
    if s == 1:
        # the poles cancel because sum chi(a) = 0: L(1) = -(1/q) sum chi(a) psi(a/q)
        return complex(-np.sum(chi[nz] * sp.psi(a[nz] / q)) / q)
    vals = hurwitz_zeta(s, a[nz] / q)
    # sum in a fixed order; q^-s applied per term to keep magnitudes tame
    return complex(np.sum(chi[nz] * vals * np.exp(-s * math.log(q))))


def two_euler_factor(s: complex, d: int) -> complex:
    """prod over primes above 2 of (1 - N^-s)."""
    split = field_params(d).two_splitting
    if split == "split":
        return (1 - 2.0 ** (-s)) ** 2
    if split == "inert":
        return 1 - 4.0 ** (-s)
    return 1 - 2.0 ** (-s)


def dedekind_zeta(s: complex, d: int, remove_two: bool = False) -> complex:
    """zeta_K(s) = zeta(s) L(s, (D_K/.)), optionally without the Euler factors above 2."""
    s = complex(s)
    if s == 1:
        raise ValueError("zeta_K has a pole at s = 1")
    val = riemann_zeta(s) * dirichlet_l_rational(s, field_params(d).disc)
    if remove_two:
        val *= two_euler_factor(s, d)
    return val


@lru_cache(maxsize=None)
def residue_rK(d: int) -> float:
    """Residue of zeta_K at s = 1 from (s-1) zeta_K(s) at s = 1 + h, 1 + 2h, one Richardson step."""
    h = 1e-6
    f1 = (h * dedekind_zeta(1 + h, d)).real
    f2 = (2 * h * dedekind_zeta(1 + 2 * h, d)).real
    return 2 * f1 - f2


def residue_rK_closed(d: int) -> float:
    fp = field_params(d)
    return 2 * math.pi / (fp.num_units * math.sqrt(abs(fp.disc)))


# -- weights ---------------------------------------------------------------

def _bump(t):
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    inside = (t > 1) & (t < 2)
    u = 2 * t[inside] - 3
    out[inside] = np.exp(-1.0 / (1 - u * u))
    return out


def _gamma_weight(t):
    t = np.asarray(t, dtype=float)
    return np.where(t > 0, t * t * np.exp(-np.clip(t, 0, None)), 0.0)


@dataclass(frozen=True)
class WeightSpec:
    """``bump``: exp(-1/(1-u^2)), u = 2t-3, supported on (1, 2).
    ``gamma_weight``: t^2 e^-t, Mellin transform Gamma(s+2)."""

    kind: str = "bump"
    nodes: int = 64
    panels: int = 8
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if self.kind not in ("bump", "gamma_weight"):
            raise ValueError(f"unknown weight kind {self.kind!r}")

    def __call__(self, t):
        return _bump(t) if self.kind == "bump" else _gamma_weight(t)

    @property
    def support(self) -> tuple[float, float]:
        return (1.0, 2.0) if self.kind == "bump" else (0.0, math.inf)


def _bump_mellin(s: complex, nodes: int, panels: int) -> complex:
    x, w = np.polynomial.legendre.leggauss(nodes)
    edges = np.linspace(1.0, 2.0, panels + 1)
    total = 0j
    for lo, hi in zip(edges[:-1], edges[1:]):
        t = 0.5 * (hi - lo) * x + 0.5 * (hi + lo)
        total += 0.5 * (hi - lo) * np.sum(w * _bump(t) * np.exp((s - 1) * np.log(t)))
    return complex(total)


def mellin_weight(spec: WeightSpec, s: complex) -> complex:
    """w^(s) = int_0^inf w(t) t^(s-1) dt."""
    s = complex(s)
    if spec.kind == "gamma_weight":
        if s.real <= -2:
            raise ValueError("Mellin transform of t^2 e^-t needs Re(s) > -2")
        return gamma_fn(s + 2)
    key = s
    if key not in spec._cache:
        # panel doubling until two successive rules agree to 1e-14
        panels = spec.panels
        prev = _bump_mellin(s, spec.nodes, panels)
        for _ in range(6):
            panels *= 2
            cur = _bump_mellin(s, spec.nodes, panels)
            if abs(cur - prev) <= 1e-14 * max(1.0, abs(cur)):
                break
            prev = cur
        else:  # pragma: no cover
            raise ArithmeticError("bump Mellin quadrature did not converge")
        spec._cache[key] = cur
    return spec._cache[key]


def mellin_weight_derivative(spec: WeightSpec, s: complex, h: float = 1e-4) -> complex:
    """d/ds w^(s) by a Richardson-extrapolated central difference."""
    def D(step):
        return (mellin_weight(spec, s + step) - mellin_weight(spec, s - step)) / (2 * step)
    return (4 * D(h / 2) - D(h)) / 3


def log_gamma_ratio(s: complex) -> complex:
    """Gamma(1/2 - s) / Gamma(1/2 + s)."""
    return cmath.exp(complex(sp.loggamma(0.5 - complex(s))) - complex(sp.loggamma(0.5 + complex(s))))
