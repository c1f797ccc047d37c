import random

import pytest
from hypothesis import given, settings, strategies as st

from hecke_ratios.field import EUCLIDEAN_FIELDS, FIELDS, QuadInt, field_params
from hecke_ratios.ideals import residue_system, split_prime
from hecke_ratios.intarith import kronecker
from hecke_ratios.primary import NotOddError, primary_elements, primary_normalize
from hecke_ratios.selfcheck import symbol_check
from hecke_ratios.symbols import chi_conductor, chi_eval, symbol, symbol_fast, symbol_mod_prime


def Q(a, b, d):
    return QuadInt(a, b, d)


def test_euler_criterion_examples():
    (P,) = [p for p in split_prime(13, -1) if p.divides(Q(3, 2, -1))]
    assert symbol_mod_prime(Q(2, 0, -1), P) == -1
    assert symbol_mod_prime(Q(4, 0, -1), P) == 1
    assert symbol_mod_prime(Q(3, 2, -1) * 5, P) == 0
    with pytest.raises(NotOddError):
        symbol_mod_prime(Q(1, 0, -1), split_prime(2, -1)[0])


def test_symbol_matches_euler_criterion_at_primes():
    rng = random.Random(3)
    for d in FIELDS:
        for p in (3, 5, 7, 11, 13, 17):
            for P in split_prime(p, d):
                if P.p == 2:
                    continue
                for _ in range(20):
                    a = Q(rng.randint(-99, 99), rng.randint(-99, 99), d)
                    assert symbol(a, P.generator) == symbol_mod_prime(a, P)


def test_supplementary_examples():
    assert symbol(Q(0, 1, -1), Q(-1, -2, -1)) == -1
    for n in primary_elements(-1, 400):
        assert symbol(Q(0, 1, -1), n) == (-1) ** ((1 - n.a) // 2)


@pytest.mark.parametrize("d", FIELDS)
def test_minus_one_law_all_odd(d):
    units = field_params(d).units
    for n in primary_elements(d, 2000):
        for u in units:
            assert symbol(Q(-1, 0, d), u * n) == (-1) ** ((n.norm() - 1) // 2)
            assert symbol(Q(2, 0, d), u * n) == kronecker(2, n.norm())


@pytest.mark.parametrize("d", FIELDS)
def test_reciprocity_exhaustive(d):
    r = symbol_check(d, 300)
    assert r.coprime_pairs > 1000
    assert r.reciprocity_failures == r.minus_one_failures == r.two_failures == 0
    assert r.fast_failures == 0


def test_symbol_fast_all_pairs_gaussian_500():
    ns = [n for n in primary_elements(-1, 500) if n.norm() > 1]
    rng = random.Random(11)
    units = field_params(-1).units
    for m in ns:
        for n in rng.sample(ns, 15):
            x, y = rng.choice(units) * m, rng.choice(units) * n
            assert symbol_fast(x, y) == symbol(x, y)


def test_symbol_fast_edges():
    assert symbol_fast(Q(5, 3, -1), Q(1, 0, -1)) == 1
    assert symbol(Q(5, 3, -7), Q(-1, 0, -7)) == 1
    with pytest.raises(ValueError):
        symbol_fast(Q(1, 1, -19), Q(3, 0, -19))
    with pytest.raises(NotOddError):
        symbol(Q(3, 0, -1), Q(1, 1, -1))


@pytest.mark.parametrize("d", FIELDS)
def test_conductor_character_trivial_on_units(d):
    for c in primary_elements(d, 60):
        for u in field_params(d).units:
            assert chi_conductor(c, u) == 1


def test_conductor_character_period_d7():
    rs = residue_system(Q(8, 0, -7))
    for x in rs.invertible():
        base = chi_conductor(Q(1, 0, -7), x)
        for shift in (Q(8, 0, -7), Q(0, 8, -7), Q(16, -24, -7)):
            assert chi_conductor(Q(1, 0, -7), x + shift) == base


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(FIELDS), st.integers(-200, 200), st.integers(-200, 200),
       st.integers(-200, 200), st.integers(-200, 200), st.integers(0, 400))
def test_multiplicativity(d, a, b, c, e, k):
    ns = primary_elements(d, 150)
    n = ns[k % len(ns)]
    m = ns[(k * 7 + 3) % len(ns)]
    x, y = Q(a, b, d), Q(c, e, d)
    assert symbol(x * y, n) == symbol(x, n) * symbol(y, n)
    assert symbol(x, m * n) == symbol(x, m) * symbol(x, n)
    assert chi_eval("lower", n, x * y) == chi_eval("lower", n, x) * chi_eval("lower", n, y)
    assert chi_eval("upper", x, n) == symbol(x, n)
