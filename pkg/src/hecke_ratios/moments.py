"""Family sums over odd square-free primary c and the main terms they are
compared against.

``convention="printed"`` evaluates the main terms exactly as stated, with
the factor r_K |U_K|^2 a(2) / zeta_K(2).  ``convention="ideal"`` is a
diagnostic alternative: the unit factor is dropped (the family has one c per
ideal) and the log-derivative terms are obtained by differentiating the
ratios main terms in alpha at alpha = beta = r.
"""

from __future__ import annotations

import cmath
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np

from .euler import a_factor, euler_P1, euler_P2, prime_log_sum, zetaK2_logderiv
from .field import QuadInt, check_field, field_params
from .hecke_l import HeckeL, LZeroError, _prime_data, INERT, SPLIT
from .ideals import is_squarefree
from .intarith import is_squarefree_int
from .primary import primary_set
from .special import WeightSpec, dedekind_zeta, gamma_fn, mellin_weight, residue_rK

log = logging.getLogger(__name__)

MODES = ("first", "ratios", "logderiv")
CONVENTIONS = ("printed", "ideal")


class RangeError(ValueError):
    """A parameter is outside the range in which the asymptotic is stated."""


# -- family -------------------------------------------------------------------

def enumerate_c(d: int, lo: float, hi: float) -> list[QuadInt]:
    """Odd square-free primary c with lo < N(c) <= hi, sorted by (N(c), a, b)."""
    check_field(d)
    if not 0 <= lo < hi:
        raise ValueError("need 0 <= lo < hi")
    if hi < 1:
        return []
    fp = field_params(d)
    t = 1 if d % 4 == 1 else 0
    n0 = (d - 1) // 4 if t else d
    ps = primary_set(d)
    I = ps.ideal
    table = np.zeros((I.d1, I.d2), dtype=bool)
    for x, y in ps.classes:
        table[x, y] = True
    H = int(math.floor(hi))
    bmax = math.isqrt(4 * H // abs(fp.disc)) + 1
    out = []
    for b in range(-bmax, bmax + 1):
        span = math.isqrt(H) + 2
        a0 = -(t * b) // 2
        a = np.arange(a0 - span, a0 + span + 1, dtype=np.int64)
        nrm = a * a + t * a * b - n0 * b * b
        keep = (nrm > lo) & (nrm <= hi) & (nrm % 2 == 1)
        a, nrm = a[keep], nrm[keep]
        x, y = I.reduce_coords(a, np.full_like(a, b))
        keep = table[x, y]
        for ai, ni in zip(a[keep].tolist(), nrm[keep].tolist()):
            c = QuadInt(ai, b, d)
            if is_squarefree_int(ni) or is_squarefree(c):
                out.append(c)
    out.sort(key=lambda c: (c.norm(), c.a, c.b))
    return out


def _mu_ideal_coeffs(d: int, n: int) -> np.ndarray:
    """Coefficients of 1/zeta_K^(2)(s): sum of mu_K over odd ideals of each norm <= n."""
    mu = np.zeros(n + 1, dtype=np.int64)
    mu[1] = 1
    if n < 3:
        return mu
    pd = _prime_data(d, n)
    for p, kind in zip(pd.primes.tolist(), pd.kind.tolist()):
        if p > n:
            break
        if kind == SPLIT:
            local = {p: -2, p * p: 1}
        elif kind == INERT:
            local = {p * p: -1}
        else:
            local = {p: -1}
        new = mu.copy()
        for q, v in local.items():
            if q <= n:
                new[q::q][: len(mu[1: n // q + 1])] += v * mu[1: n // q + 1]
        mu = new
    return mu


def count_c_sieve(d: int, X: float) -> int:
    """Independent count of odd square-free ideals with norm <= X:
    sum over odd m of mu_K(m) * #{odd ideals of norm <= X / N(m)^2}."""
    X = int(math.floor(X))
    if X < 1:
        return 0
    D = field_params(d).disc
    from .intarith import kronecker
    # odd ideals of norm n = sum_{k | n} (D/k) for odd n, and none of even norm
    chi = np.array([0] + [kronecker(D, k) for k in range(1, X + 1)], dtype=np.int64)
    cnt = np.zeros(X + 1, dtype=np.int64)
    for k in range(1, X + 1, 2):
        if chi[k]:
            cnt[k::2 * k] += chi[k]
    cum = np.cumsum(cnt)
    mu = _mu_ideal_coeffs(d, math.isqrt(X))
    total = 0
    for m in range(1, math.isqrt(X) + 1):
        if mu[m]:
            total += int(mu[m]) * int(cum[X // (m * m)])
    return total


# -- requests and reports ----------------------------------------------------------

@dataclass(frozen=True)
class MomentRequest:
    d: int
    X: float
    mode: str = "first"
    alpha: complex = 0.25
    beta: complex = 0.3
    r: complex = 0.25
    weight: str = "bump"
    eps: float = 1e-9
    rel_eps: float = 1e-10
    convention: str = "printed"

    def validate(self) -> "MomentRequest":
        check_field(self.d)
        if not self.X > 0:
            raise RangeError("X must be positive")
        if self.mode not in MODES:
            raise RangeError(f"mode must be one of {MODES}")
        if self.convention not in CONVENTIONS:
            raise RangeError(f"convention must be one of {CONVENTIONS}")
        WeightSpec(self.weight)
        if self.mode in ("first", "ratios"):
            if not 0 < abs(complex(self.alpha).real) < 0.5:
                raise RangeError("alpha violates 0 < |Re(alpha)| < 1/2")
        if self.mode == "ratios" and not complex(self.beta).real > 0:
            raise RangeError("beta violates Re(beta) > 0")
        if self.mode == "logderiv" and not 0 < complex(self.r).real < 0.5:
            raise RangeError("r violates 0 < Re(r) < 1/2")
        return self


@dataclass(frozen=True)
class MomentReport:
    d: int
    X: float
    mode: str
    alpha: complex
    beta: complex
    r: complex
    weight: str
    eps: float
    rel_eps: float
    convention: str
    lhs: complex
    main1: complex
    main2: complex
    residual: complex
    relative_residual: float
    predicted_exponent: float
    constant_ratio: complex
    num_c: int
    skipped_c: int

    def as_dict(self) -> dict:
        return asdict(self)


# -- per-c terms ---------------------------------------------------------------------

def _term_points(req: MomentRequest) -> tuple:
    if req.mode == "first":
        return ("first", complex(0.5 + req.alpha))
    if req.mode == "ratios":
        return ("ratios", complex(0.5 + req.alpha), complex(0.5 + req.beta))
    return ("logderiv", complex(0.5 + req.r))


def _terms_chunk(args) -> list[tuple[complex, bool]]:
    d, coords, points, eps = args
    out = []
    for a, b in coords:
        c = QuadInt(a, b, d)
        H = HeckeL(c, eps, check=False)
        try:
            if points[0] == "first":
                out.append((H.value(points[1]).value, False))
            elif points[0] == "ratios":
                num = H.value(points[1]).value
                den = H.value(points[2])
                if abs(den.value) < 10 * den.abs_error_estimate:
                    raise LZeroError(f"L({points[2]}) vanishes numerically for c = {c}")
                out.append((num / den.value, False))
            else:
                out.append((H.log_derivative(points[1]), False))
        except LZeroError as exc:
            log.warning("skipping c = %s: %s", c, exc)
            out.append((0j, True))
    return out


def family_terms(d: int, cs: Sequence[QuadInt], points: tuple, eps: float,
                 workers: int = 1, chunk: int = 64) -> list[tuple[complex, bool]]:
    """T(c) for each c, in the given order, possibly across worker processes."""
    coords = [(c.a, c.b) for c in cs]
    jobs = [(d, coords[i:i + chunk], points, eps) for i in range(0, len(coords), chunk)]
    if workers <= 1 or len(jobs) <= 1:
        parts = [_terms_chunk(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_terms_chunk, jobs))
    return [t for part in parts for t in part]


def _window(req: MomentRequest) -> tuple[float, float]:
    lo, hi = WeightSpec(req.weight).support
    if math.isinf(hi):
        # t^2 e^-t below 1e-18 relative beyond t = 50
        hi = 50.0
    return lo * req.X, hi * req.X


def _weighted_sum(cs, terms, X, weight) -> tuple[complex, int]:
    w = WeightSpec(weight)
    wts = w(np.array([c.norm() / X for c in cs], dtype=float)).tolist()
    total = 0j
    skipped = 0
    for (T, skip), wt in zip(terms, wts):
        if skip:
            skipped += 1
            continue
        total += T * wt  # canonical order, plain left-to-right accumulation
    return total, skipped


def family_sum(req: MomentRequest, workers: int = 1) -> tuple[complex, int, int]:
    """(sum of T(c) w(N(c)/X) over the family, number of c, number skipped)."""
    req.validate()
    lo, hi = _window(req)
    cs = enumerate_c(req.d, max(lo - 1e-9, 0.0), hi)
    terms = family_terms(req.d, cs, _term_points(req), req.eps, workers)
    total, skipped = _weighted_sum(cs, terms, req.X, req.weight)
    return total, len(cs), skipped


# -- main terms ------------------------------------------------------------------------

def unit_constant(d: int, convention: str = "printed") -> float:
    """r_K |U_K|^2 a(2) / zeta_K(2) (printed) or r_K a(2) / zeta_K(2) (ideal)."""
    fp = field_params(d)
    u2 = fp.num_units ** 2 if convention == "printed" else 1
    a2 = float(a_factor(QuadInt(2, 0, d)))
    return residue_rK(d) * u2 * a2 / dedekind_zeta(2, d).real


def _zeta2(s, d):
    return dedekind_zeta(s, d, remove_two=True)


def _m2_prefactor(req: MomentRequest, shift: complex) -> complex:
    fp = field_params(req.d)
    w = WeightSpec(req.weight)
    return (cmath.exp((1 - shift) * math.log(req.X)) * mellin_weight(w, 1 - shift)
            * cmath.exp(-shift * math.log(abs(fp.disc) * fp.norm_c_K))
            * cmath.exp(2 * shift * math.log(2 * math.pi))
            * gamma_fn(0.5 - shift) / gamma_fn(0.5 + shift))


def main_terms_first(req: MomentRequest) -> tuple[complex, complex]:
    req.validate()
    a = complex(req.alpha)
    C = unit_constant(req.d, req.convention)
    w = WeightSpec(req.weight)
    M1 = req.X * mellin_weight(w, 1) * C * _zeta2(1 + 2 * a, req.d) * euler_P1(0.5 + a, req.d, req.rel_eps)
    M2 = _m2_prefactor(req, a) * C * _zeta2(1 - 2 * a, req.d) * euler_P1(0.5 - a, req.d, req.rel_eps)
    return M1, M2


def _ratio_terms(d, X, weight, a, b, C, rel_eps, convention="printed"):
    req = MomentRequest(d, X, "ratios", a, b, weight=weight, convention=convention)
    w = WeightSpec(weight)
    if a == b:
        M1 = X * mellin_weight(w, 1) * C
    else:
        M1 = (X * mellin_weight(w, 1) * C * _zeta2(1 + 2 * a, d) / _zeta2(1 + a + b, d)
              * euler_P2(0.5 + a, 0.5 + b, d, rel_eps))
    if a == b:
        # 1 / zeta_K^(2)(1 - a + b) vanishes at the pole
        return M1, 0j
    M2 = (_m2_prefactor(req, a) * C * _zeta2(1 - 2 * a, d) / _zeta2(1 - a + b, d)
          * euler_P2(0.5 - a, 0.5 + b, d, rel_eps))
    return M1, M2


def main_terms_ratios(req: MomentRequest) -> tuple[complex, complex]:
    req.validate()
    a, b = complex(req.alpha), complex(req.beta)
    return _ratio_terms(req.d, req.X, req.weight, a, b, unit_constant(req.d, req.convention),
                        req.rel_eps, req.convention)


def main_terms_logderiv(req: MomentRequest) -> tuple[complex, complex]:
    req.validate()
    r = complex(req.r)
    d = req.d
    if req.convention == "ideal":
        return _logderiv_by_differentiation(req)
    fp = field_params(d)
    w = WeightSpec(req.weight)
    C = unit_constant(d, "printed")
    a2 = float(a_factor(QuadInt(2, 0, d)))
    M1 = req.X * mellin_weight(w, 1) * C * (zetaK2_logderiv(1 + 2 * r, d) + prime_log_sum(r, d, req.rel_eps))
    M2 = -_m2_prefactor(req, r) * fp.num_units ** 2 * a2 / _zeta2(2 - 2 * r, d)
    return M1, M2


def _logderiv_by_differentiation(req: MomentRequest, h: float = 1e-4) -> tuple[complex, complex]:
    """d/d(alpha) of the ratios main terms at alpha = beta = r.

    M2(alpha, r) vanishes at alpha = r (1/zeta^(2) at its pole), so the
    central difference is taken between alpha = r - h and r + h on both terms.
    """
    r = complex(req.r)
    C = unit_constant(req.d, req.convention)

    def terms(a):
        return _ratio_terms(req.d, req.X, req.weight, a, r, C, req.rel_eps, req.convention)

    def D(step):
        p, m = terms(r + step), terms(r - step)
        return (p[0] - m[0]) / (2 * step), (p[1] - m[1]) / (2 * step)

    d1, d2 = D(h), D(h / 2)
    return (4 * d2[0] - d1[0]) / 3, (4 * d2[1] - d1[1]) / 3


def main_terms(req: MomentRequest) -> tuple[complex, complex]:
    if req.mode == "first":
        return main_terms_first(req)
    if req.mode == "ratios":
        return main_terms_ratios(req)
    return main_terms_logderiv(req)


# -- exponents -------------------------------------------------------------------------

def error_exponent(mode: str, alpha: complex = 0.25, beta: complex | None = None, r: complex = 0.25) -> float:
    if mode == "ratios":
        a, b = complex(alpha).real, complex(beta if beta is not None else 0.3).real
        return max(0.5, 1 - a - b, 1 - a / 2 - b / 2, 0.5 - a / 2, 0.5 - a)
    if mode == "first":
        a = complex(alpha).real
        return max(0.5, 0.5 - a / 2, 0.5 - a)
    if mode == "logderiv":
        return 1 - 2 * complex(r).real
    raise RangeError(f"unknown mode {mode!r}")


def fit_exponent(points: Iterable[tuple[float, float]]) -> float:
    """Least-squares slope of log|residual| against log X."""
    pts = list(points)
    if len(pts) < 3:
        raise ValueError("need at least 3 points")
    X = np.array([p[0] for p in pts], dtype=float)
    R = np.array([p[1] for p in pts], dtype=float)
    if np.any(X <= 0) or np.any(R <= 0):
        raise ValueError("X and residuals must be positive")
    if np.ptp(np.log(X)) == 0:
        raise ValueError("all X values coincide")
    return float(np.polyfit(np.log(X), np.log(R), 1)[0])


# -- experiments ------------------------------------------------------------------------

def _report(req: MomentRequest, lhs: complex, num_c: int, skipped: int) -> MomentReport:
    M1, M2 = main_terms(req)
    res = lhs - M1 - M2
    beta = req.beta if req.mode == "ratios" else None
    return MomentReport(
        d=req.d, X=float(req.X), mode=req.mode, alpha=complex(req.alpha), beta=complex(req.beta),
        r=complex(req.r), weight=req.weight, eps=req.eps, rel_eps=req.rel_eps,
        convention=req.convention, lhs=complex(lhs), main1=complex(M1), main2=complex(M2),
        residual=complex(res), relative_residual=abs(res) / abs(M1),
        predicted_exponent=error_exponent(req.mode, req.alpha, beta, req.r),
        constant_ratio=complex((lhs - M2) / M1), num_c=num_c, skipped_c=skipped)


def run_moment(req: MomentRequest, workers: int = 1) -> MomentReport:
    lhs, n, skipped = family_sum(req, workers)
    return _report(req, lhs, n, skipped)


def sweep(req: MomentRequest, X_grid: Sequence[float], workers: int = 1) -> list[MomentReport]:
    """One report per X; T(c) is computed once per c across the whole grid."""
    req.validate()
    reqs = [replace(req, X=float(X)).validate() for X in X_grid]
    lo = min(_window(q)[0] for q in reqs)
    hi = max(_window(q)[1] for q in reqs)
    cs = enumerate_c(req.d, max(lo - 1e-9, 0.0), hi)
    terms = family_terms(req.d, cs, _term_points(req), req.eps, workers)
    out = []
    for q in reqs:
        qlo, qhi = _window(q)
        idx = [i for i, c in enumerate(cs) if qlo < c.norm() <= qhi or (qlo == 0 and c.norm() <= qhi)]
        sub = [cs[i] for i in idx]
        lhs, skipped = _weighted_sum(sub, [terms[i] for i in idx], q.X, q.weight)
        out.append(_report(q, lhs, len(sub), skipped))
    return out


@dataclass(frozen=True)
class CentralFit:
    q0: float
    q1: float
    fit_residual: float
    pm_agreement: float
    values: tuple[float, ...]


def central_value_poly(d: int, X_grid: Sequence[float], weight: str = "bump", h: float = 1e-3,
                       convention: str = "printed") -> CentralFit:
    """The alpha -> 0 limit of M1 + M2 for the first moment, fitted by X (q0 + q1 log X)."""
    vals, agree = [], []
    for X in X_grid:
        def f(a):
            return sum(main_terms_first(MomentRequest(d, X, "first", a, weight=weight, convention=convention))).real
        fp_, fm = f(h), f(-h)
        f2p, f2m = f(2 * h), f(-2 * h)
        even = (4 * (fp_ + fm) / 2 - (f2p + f2m) / 2) / 3
        plus, minus = 2 * fp_ - f2p, 2 * fm - f2m
        agree.append(abs(plus - minus) / abs(even))
        vals.append(even / X)
    lx = np.log(np.asarray(X_grid, dtype=float))
    q1, q0 = np.polyfit(lx, vals, 1)
    fit = q0 + q1 * lx
    resid = float(np.max(np.abs(fit - vals) / np.abs(vals)))
    return CentralFit(float(q0), float(q1), resid, float(max(agree)), tuple(vals))
