import math

import numpy as np
import pytest

from hecke_ratios.field import FIELDS, QuadInt
from hecke_ratios.moments import (MomentRequest, RangeError, _ratio_terms, central_value_poly,
                                  count_c_sieve, enumerate_c, error_exponent, family_sum,
                                  fit_exponent, main_terms, main_terms_first, run_moment, sweep,
                                  unit_constant)
from hecke_ratios.special import WeightSpec


def Q(a, b, d):
    return QuadInt(a, b, d)


def test_enumerate_examples():
    assert enumerate_c(-1, 0, 10) == [Q(1, 0, -1), Q(-1, -2, -1), Q(-1, 2, -1), Q(-3, 0, -1)]
    assert enumerate_c(-3, 0, 0.5) == []


@pytest.mark.parametrize("d, expected", [(-1, 3483), (-3, 3772), (-7, 2773), (-163, 1807)])
def test_enumerate_matches_sieve(d, expected):
    assert len(enumerate_c(d, 0, 10 ** 4)) == count_c_sieve(d, 10 ** 4) == expected


@pytest.mark.parametrize("d", [-2, -11, -19, -43, -67])
def test_enumerate_matches_sieve_other_fields(d):
    assert len(enumerate_c(d, 0, 3000)) == count_c_sieve(d, 3000)


def test_family_sum_small_windows():
    assert family_sum(MomentRequest(-1, 0.4)) == (0j, 0, 0)
    lhs, n, skipped = family_sum(MomentRequest(-1, 3))
    assert n == 2 and skipped == 0
    # both norm-5 characters contribute with weight w(5/3)
    from hecke_ratios.hecke_l import l_value
    w = WeightSpec("bump")(np.array([5 / 3]))[0]
    expected = sum(l_value(0.75, c).value * w for c in enumerate_c(-1, 3, 6))
    assert abs(lhs - expected) < 1e-12


def test_worker_count_does_not_change_bits():
    req = MomentRequest(-1, 150)
    a = run_moment(req, workers=1)
    b = run_moment(req, workers=3)
    assert a == b


def test_validation_names_constraint():
    with pytest.raises(RangeError, match=r"0 < \|Re\(alpha\)\| < 1/2"):
        MomentRequest(-1, 100, alpha=0.6).validate()
    with pytest.raises(RangeError, match=r"Re\(beta\) > 0"):
        MomentRequest(-1, 100, "ratios", beta=-0.1).validate()
    with pytest.raises(RangeError, match=r"0 < Re\(r\) < 1/2"):
        MomentRequest(-7, 100, "logderiv", r=0.5).validate()
    with pytest.raises(ValueError):
        MomentRequest(-5, 100).validate()


def test_main_term_regression_values():
    M1, M2 = main_terms(MomentRequest(-1, 1000, "first"))
    assert abs(M1 - 1731.98214115858) < 1e-8 and abs(M2 + 89.49721760782505) < 1e-8
    M1, M2 = main_terms(MomentRequest(-1, 1000, "ratios"))
    assert abs(M1 - 1286.5169211751438) < 1e-8 and abs(M2 + 11.35921271231492) < 1e-8
    M1, M2 = main_terms(MomentRequest(-7, 1000, "logderiv"))
    assert abs(M1 + 182.35450036653467) < 1e-7 and abs(M2 + 79.65089997636197) < 1e-7


def test_main_term_properties():
    M1, M2 = main_terms_first(MomentRequest(-3, 1000, alpha=0.2))
    assert M1.imag == 0 and M2.imag == 0
    N1, N2 = main_terms_first(MomentRequest(-3, 2000, alpha=0.2))
    assert abs((N2 / N1) / (M2 / M1) - 2 ** -0.2) < 1e-12
    big = main_terms(MomentRequest(-1, 1000, "ratios", beta=30))
    first = main_terms_first(MomentRequest(-1, 1000))
    assert abs(big[0] - first[0]) < 1e-6 * abs(first[0])
    assert abs(big[1] - first[1]) < 1e-6 * abs(first[1])
    C = unit_constant(-1)
    M1, M2 = _ratio_terms(-1, 1000, "bump", 0.25, 0.25, C, 1e-10)
    assert M2 == 0 and abs(M1 - 1000 * C * _bump_hat1()) < 1e-9
    L1, L2 = main_terms(MomentRequest(-7, 1000, "logderiv"))
    assert L1.imag == 0 and L2.imag == 0 and L2.real < 0


def _bump_hat1():
    from hecke_ratios.special import mellin_weight
    return mellin_weight(WeightSpec("bump"), 1).real


@pytest.mark.parametrize("d", [-1, -3, -7])
def test_counting_identifies_unit_factor(d):
    # with T(c) = 1 the family sum is a weighted count of square-free odd ideals;
    # the printed constant overshoots it by exactly |U_K|^2
    from hecke_ratios.field import field_params
    X = 20000
    cs = enumerate_c(d, X, 2 * X)
    count = float(np.sum(WeightSpec("bump")(np.array([c.norm() / X for c in cs]))))
    printed = _ratio_terms(d, X, "bump", 0.25, 0.25, unit_constant(d), 1e-10)[0].real
    ideal = _ratio_terms(d, X, "bump", 0.25, 0.25, unit_constant(d, "ideal"), 1e-10)[0].real
    assert abs(count / ideal - 1) < 0.01
    assert abs(count / printed * field_params(d).num_units ** 2 - 1) < 0.01


def test_error_exponents():
    assert error_exponent("ratios", 0.25, 0.25) == 0.75
    assert abs(error_exponent("ratios", 0.25, 0.3) - 0.725) < 1e-15
    assert error_exponent("first", 0.1) == 0.5
    assert error_exponent("logderiv", r=0.25) == 0.5


def test_fit_exponent():
    X = np.array([250, 500, 1000, 2000, 4000.0])
    assert abs(fit_exponent(zip(X, X ** 0.5)) - 0.5) < 1e-12
    assert abs(fit_exponent(zip(X, np.full(5, 3.0)))) < 1e-12
    rng = np.random.default_rng(0)
    noisy = X ** 0.5 * (1 + 0.01 * rng.standard_normal(5))
    assert abs(fit_exponent(zip(X, noisy)) - 0.5) < 0.05
    with pytest.raises(ValueError):
        fit_exponent([(1, 1), (2, 2)])


def test_sweep_matches_single_runs():
    req = MomentRequest(-1, 100, "ratios")
    reps = sweep(req, [100, 200])
    assert reps[1] == run_moment(MomentRequest(-1, 200, "ratios"))
    assert [r.X for r in reps] == [100.0, 200.0]


def test_central_value_fit():
    fit = central_value_poly(-1, [250, 500, 1000, 2000, 4000])
    assert fit.q1 > 0
    assert fit.fit_residual < 1e-3
    assert fit.pm_agreement < 1e-6
