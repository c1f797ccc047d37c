import math

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from hecke_ratios.field import FIELDS
from hecke_ratios.special import (WeightSpec, dedekind_zeta, digamma, dirichlet_l_rational,
                                  gamma_fn, hurwitz_zeta, log_gamma_ratio, mellin_weight,
                                  mellin_weight_derivative, residue_rK, residue_rK_closed,
                                  riemann_zeta, two_euler_factor)

CATALAN = 0.915965594177219015054603514932


def test_gamma_examples():
    assert abs(gamma_fn(1) - 1) < 1e-15
    assert abs(gamma_fn(0.5) - math.sqrt(math.pi)) < 1e-15
    assert abs(gamma_fn(2.75) - 1.6083594219855455) < 1e-13
    with pytest.raises(ValueError):
        gamma_fn(-2)


def test_digamma_against_mpmath():
    for s in (0.3, 2.5 + 1j, 0.75 - 3j):
        assert abs(digamma(s) - complex(mpmath.digamma(s))) < 1e-13


def test_hurwitz_examples():
    assert abs(hurwitz_zeta(2, 1) - math.pi ** 2 / 6) < 1e-15
    assert abs(hurwitz_zeta(3.5, 1) - riemann_zeta(3.5)) < 1e-15
    assert abs(hurwitz_zeta(0.5, 0.25) - complex(mpmath.zeta(0.5, 0.25))) < 1e-13


@settings(max_examples=40, deadline=None)
@given(st.floats(-3, 6), st.floats(-30, 30), st.floats(0.05, 3))
def test_hurwitz_against_mpmath(sr, si, a):
    s = complex(sr, si)
    if abs(s - 1) < 1e-3:
        return
    ref = complex(mpmath.zeta(s, a))
    assert abs(hurwitz_zeta(s, a) - ref) <= 1e-11 * max(1.0, abs(ref))


def test_dirichlet_examples():
    assert abs(dirichlet_l_rational(1, -4) - math.pi / 4) < 1e-14
    assert abs(dirichlet_l_rational(2, -4) - CATALAN) < 1e-15


def _kron(D, k):
    from hecke_ratios.intarith import kronecker
    return kronecker(D, k)


@pytest.mark.parametrize("D", [-3, -4, -7, -8, -11, -19, -43, -67, -163])
def test_dirichlet_against_mpmath(D):
    chi = [_kron(D, k) for k in range(abs(D))]
    assert all(_kron(D, k + abs(D)) == chi[k] for k in range(abs(D)))
    for s in (0.5, 0.5 + 14j, 2, 1.3 - 2j):
        ref = complex(mpmath.dirichlet(s, chi))
        assert abs(dirichlet_l_rational(s, D) - ref) < 1e-12 * max(1, abs(ref))


def test_dedekind_examples():
    assert abs(dedekind_zeta(2, -1) - math.pi ** 2 / 6 * CATALAN) < 1e-14
    assert abs(dedekind_zeta(2, -1) - 1.5067030099229848) < 1e-14
    s = 1.7
    assert abs(two_euler_factor(s, -43) - (1 - 4 ** -s)) < 1e-16
    assert abs(two_euler_factor(s, -7) - (1 - 2 ** -s) ** 2) < 1e-16
    assert abs(two_euler_factor(s, -1) - (1 - 2 ** -s)) < 1e-16
    with pytest.raises(ValueError):
        dedekind_zeta(1, -7)


@pytest.mark.parametrize("d", FIELDS)
def test_residues(d):
    assert abs(residue_rK(d) - residue_rK_closed(d)) < 1e-6
    D = -4 if d == -1 else (-8 if d == -2 else d)
    assert abs(residue_rK_closed(d) - dirichlet_l_rational(1, D).real) < 1e-12


def test_residue_examples():
    assert abs(residue_rK(-1) - 0.7853981634) < 1e-9
    assert abs(residue_rK(-3) - 0.6045997881) < 1e-9


def test_weights():
    g = WeightSpec("gamma_weight")
    assert abs(mellin_weight(g, 1) - 2) < 1e-14
    assert abs(mellin_weight(g, 0.75) - 1.6083594219855455) < 1e-13
    b = WeightSpec("bump")
    v0 = mellin_weight(b, 0)
    assert v0.real > 0
    ref = mpmath.quad(lambda t: mpmath.exp(-1 / (1 - (2 * t - 3) ** 2)) / t, [1, 1.5, 2])
    assert abs(v0 - float(ref)) < 1e-12
    fine = WeightSpec("bump", nodes=96, panels=32)
    assert abs(mellin_weight(fine, 0.3 + 2j) - mellin_weight(b, 0.3 + 2j)) < 1e-10
    with pytest.raises(ValueError):
        WeightSpec("box")


def test_weight_derivative_and_gamma_ratio():
    g = WeightSpec("gamma_weight")
    assert abs(mellin_weight_derivative(g, 1) - complex(mpmath.diff(lambda s: mpmath.gamma(s + 2), 1))) < 1e-9
    s = 0.2 + 0.4j
    assert abs(log_gamma_ratio(s) - complex(mpmath.gamma(0.5 - s) / mpmath.gamma(0.5 + s))) < 1e-13
