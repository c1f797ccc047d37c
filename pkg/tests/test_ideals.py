import math

import pytest
from hypothesis import given, settings, strategies as st

from hecke_ratios.field import FIELDS, QuadInt, field_params
from hecke_ratios.ideals import (factor_element, ideal_gcd, ideal_of, is_squarefree,
                                 principal_generator, residue_system, split_prime)


def Q(a, b, d):
    return QuadInt(a, b, d)


def associates(x, y):
    return any(u * x == y for u in field_params(x.d).units)


def test_hnf_examples():
    I = ideal_of(Q(2, 0, -1))
    assert (I.d1, I.c, I.d2, I.norm()) == (2, 0, 2, 4)
    w = Q(0, 1, -19)
    J = ideal_of(w)
    assert J.norm() == 5 and J.contains(w) and J.contains(w * w) and J.contains(w - 5)
    for d in FIELDS:
        U = ideal_of(Q(1, 0, d))
        assert (U.d1, U.d2) == (1, 1)


def test_gcd_examples():
    for d in FIELDS:
        assert ideal_gcd(ideal_of(Q(4, 0, d)), ideal_of(Q(6, 0, d))) == ideal_of(Q(2, 0, d))
    assert ideal_gcd(ideal_of(Q(2, 0, -19)), ideal_of(Q(0, 1, -19))).is_unit_ideal()
    g = ideal_gcd(ideal_of(Q(5, 0, -1)), ideal_of(Q(-1, -2, -1)))
    assert g.norm() == 5


def test_principal_generator_examples():
    assert associates(principal_generator(ideal_of(Q(7, 0, -1))), Q(7, 0, -1))
    g = principal_generator(ideal_gcd(ideal_of(Q(5, 0, -1)), ideal_of(Q(-1, -2, -1))))
    assert associates(g, Q(1, 2, -1))
    P = split_prime(11, -43)
    assert len(P) == 2
    for pe in P:
        assert pe.generator.norm() == 11
        assert ideal_of(pe.generator) == ideal_of(principal_generator(ideal_of(pe.generator)))


def test_split_prime_examples():
    ps = split_prime(5, -1)
    assert len(ps) == 2 and all(p.norm == 5 for p in ps)
    assert {frozenset([p.generator]) for p in ps}
    assert any(associates(p.generator, Q(2, 1, -1)) for p in ps)
    assert any(associates(p.generator, Q(2, -1, -1)) for p in ps)
    (inert,) = split_prime(3, -1)
    assert inert.norm == 9 and inert.residue_degree == 2
    ps = split_prime(3, -11)
    w = Q(0, 1, -11)
    assert sorted(p.generator.norm() for p in ps) == [3, 3]
    assert any(associates(p.generator, w) for p in ps) and any(associates(p.generator, w.conj()) for p in ps)


def test_factor_examples():
    f = factor_element(Q(-3, 4, -1))
    assert len(f.factors) == 1 and f.factors[0][1] == 2 and f.expand() == Q(-3, 4, -1)
    assert factor_element(Q(0, 1, -1)).factors == ()
    f = factor_element(Q(2, 0, -7))
    assert [P.norm for P, _ in f.factors] == [2, 2]


def test_squarefree_examples():
    assert is_squarefree(Q(3, 2, -1))
    assert not is_squarefree(Q(-3, 4, -1))
    for d in FIELDS:
        assert not is_squarefree(Q(9, 0, d))


def test_residue_system_examples():
    assert len(residue_system(Q(1, 1, -1))) == 2
    for d in FIELDS:
        assert len(residue_system(Q(4, 0, d))) == 16
    rs = residue_system(field_params(-2).c_K)
    assert len(rs) == 32 and int(rs.invertible_mask().sum()) == 16


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(FIELDS), st.integers(-300, 300), st.integers(-300, 300))
def test_factor_reconstructs(d, a, b):
    n = Q(a, b, d)
    if n:
        f = factor_element(n)
        assert f.expand() == n
        assert f.unit.is_unit()
        assert math.prod(P.norm ** e for P, e in f.factors) == n.norm()


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(FIELDS), st.integers(-60, 60), st.integers(-60, 60), st.integers(-60, 60),
       st.integers(-60, 60))
def test_ideal_product_norm(d, a, b, c, e):
    m, n = Q(a, b, d), Q(c, e, d)
    if m and n:
        assert (ideal_of(m) * ideal_of(n)) == ideal_of(m * n)
        g = principal_generator(ideal_gcd(ideal_of(m), ideal_of(n)))
        assert ideal_of(g) == ideal_gcd(ideal_of(m), ideal_of(n))
