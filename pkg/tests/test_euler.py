import math
import random
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from hecke_ratios.euler import (DivergentRange, a_factor, euler_P1, euler_P2, prime_log_sum,
                                prime_norm_stream, prime_zeta_odd, zetaK2_logderiv)
from hecke_ratios.field import FIELDS, QuadInt
from hecke_ratios.intarith import kronecker


def direct_product(d, factor, bound=1 << 21):
    st = prime_norm_stream(d, bound)
    N = st.norms.astype(float)
    return complex(np.exp(np.sum(st.mult * np.log1p(factor(N)))))


def test_a_factor_examples():
    assert a_factor(QuadInt(2, 0, -1)) == Fraction(2, 3)
    assert a_factor(QuadInt(2, 0, -7)) == Fraction(4, 9)
    assert a_factor(QuadInt(2, 0, -3)) == Fraction(4, 5)
    assert a_factor(QuadInt(15, 0, -1)) == Fraction(9, 10) * Fraction(5, 6) ** 2


def test_prime_norm_stream_counts():
    st = prime_norm_stream(-1, 100)
    # odd primes p = 1 mod 4 up to 100 split, p = 3 mod 4 with p^2 <= 100 are inert
    split = [p for p in range(3, 101) if all(p % q for q in range(2, p)) and p % 4 == 1]
    inert = [3, 7]
    assert st.count() == 2 * len(split) + len(inert)
    assert 2 not in st.norms.tolist()


def test_P2_frozen_and_brute_force():
    v = euler_P2(0.75, 1.0, -1, full=True)
    assert abs(v.value - 0.9849233727767243) < 1e-12
    w, z = 0.75, 1.0
    ref = direct_product(-1, lambda N: (1 - N ** (z - w)) / ((N + 1) * (N ** (z + w) - 1)))
    assert abs(v.value - ref) < 1e-10
    assert v.tail_budget < 1e-10


def test_P1_frozen_and_brute_force():
    assert abs(euler_P1(0.75, -1) - 0.9611052844361849) < 1e-12
    assert abs(euler_P1(0.25, -1) - 0.7145749919560054) < 1e-10
    ref = direct_product(-7, lambda N: -1 / ((N + 1) * N ** 1.5))
    assert abs(euler_P1(0.75, -7) - ref) < 1e-10


def test_P_identities():
    rng = random.Random(1)
    for _ in range(20):
        w = complex(rng.uniform(0.1, 2), rng.uniform(-3, 3))
        assert euler_P2(w, w, rng.choice(FIELDS)) == 1
    for d in (-1, -3, -43):
        for w in (0.3, 0.75, 1.2 + 0.5j):
            assert abs(euler_P2(w, 40, d) - euler_P1(w, d)) <= 1e-8


def test_P1_limits_and_bounds():
    vals = [euler_P1(w, -11).real for w in (0.3, 0.6, 1.0, 3.0, 20.0)]
    assert all(0 < v < 1 for v in vals[:-1]) and 0 < vals[-1] <= 1
    assert vals == sorted(vals)
    assert abs(vals[-1] - 1) < 1e-12


def test_stable_under_bound_doubling():
    import hecke_ratios.euler as E
    base = euler_P2(0.75, 1.0, -1, rel_eps=1e-12, full=True)
    looser = euler_P2(0.75, 1.0, -1, rel_eps=1e-8, full=True)
    assert base.bound > looser.bound
    assert abs(base.value - looser.value) < 1e-8
    b = euler_P1(0.75, -1, rel_eps=1e-13, full=True)
    assert abs(b.value - euler_P1(0.75, -1)) < 1e-10
    p1 = prime_log_sum(0.25, -1, rel_eps=1e-13, full=True)
    assert abs(p1.value - prime_log_sum(0.25, -1)) < 1e-10


def test_ranges():
    with pytest.raises(DivergentRange):
        euler_P2(0.75, -1.0, -1)
    with pytest.raises(DivergentRange):
        euler_P1(-0.1, -1)
    with pytest.raises(DivergentRange):
        prime_zeta_odd(1.0, -1)
    with pytest.raises(DivergentRange):
        zetaK2_logderiv(1 + 1e-8, -1)


def test_prime_log_sum():
    v = prime_log_sum(0.25, -1)
    assert abs(v - 0.09110490597816102) < 1e-12
    st = prime_norm_stream(-1, 1 << 21)
    N = st.norms.astype(float)
    ref = float(np.sum(st.mult * np.log(N) / (N * (N ** 1.5 - 1))))
    # prime ideals beyond B have density 1 / log N, so the tail is about B^-1.5 / 1.5
    tail = st.bound ** -1.5 / 1.5
    assert abs(v - ref - tail) < 2e-11
    vals = [prime_log_sum(r, -7).real for r in (0.05, 0.1, 0.25, 0.45)]
    assert vals == sorted(vals, reverse=True)
    first = math.log(3) / (3 * (3 ** 1.5 - 1))
    assert first < v.real < first * 1.6


def test_zeta_logderiv_against_mpmath():
    s = 1.5
    chi = [kronecker(-4, k) for k in range(4)]
    ref = (mpmath.zeta(s, derivative=1) / mpmath.zeta(s)
           + mpmath.diff(lambda x: mpmath.log(mpmath.dirichlet(x, chi)), s)
           + mpmath.log(2) / (2 ** s - 1))
    assert abs(zetaK2_logderiv(s, -1) - float(ref)) < 1e-9
    assert abs(zetaK2_logderiv(s, -1) - (-0.9789808944799897)) < 1e-11


def test_zeta_logderiv_prime_series():
    # -zeta'/zeta = sum over odd prime ideals, k >= 1, of log N * N^-ks
    st = prime_norm_stream(-7, 1 << 18)
    N = st.norms.astype(float)
    s = 2.5
    ref = -float(np.sum(st.mult * np.log(N) / (N ** s - 1)))
    assert abs(zetaK2_logderiv(s, -7) - ref) < 1e-6


def test_zeta_logderiv_pole_and_reflection():
    h = 1e-4
    assert abs(h * zetaK2_logderiv(1 + h, -1) + 1) < 1e-3
    s = 1.3 + 2j
    assert abs(zetaK2_logderiv(s.conjugate(), -3) - zetaK2_logderiv(s, -3).conjugate()) < 1e-10
