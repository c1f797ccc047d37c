import math

import pytest
from hypothesis import given, strategies as st

from hecke_ratios.field import (FIELDS, FieldMismatch, NotDivisible, QuadInt, QuadRat, divides,
                                exact_divide, field_params, nearest_quotient, omega_complex,
                                ring_arithmetic)


def Q(a, b, d):
    return QuadInt(a, b, d)


def test_field_params_gaussian():
    fp = field_params(-1)
    assert fp.disc == -4
    assert set(fp.units) == {Q(1, 0, -1), Q(-1, 0, -1), Q(0, 1, -1), Q(0, -1, -1)}
    assert fp.c_K == (Q(1, 1, -1)) ** 5
    assert fp.norm_c_K == 32


def test_field_params_eisenstein_and_43():
    fp = field_params(-3)
    assert fp.num_units == 6 and fp.c_K == Q(8, 0, -3) and fp.norm_c_K == 64
    fp = field_params(-43)
    assert fp.disc == -43 and fp.two_splitting == "inert"


def test_unknown_field():
    with pytest.raises(ValueError):
        field_params(-5)


@pytest.mark.parametrize("n, expected", [(Q(3, 2, -1), 13), (Q(2, 3, -3), 19), (Q(1, 1, -2), 3)])
def test_norm_examples(n, expected):
    assert n.norm() == expected


def test_ring_examples():
    w = Q(0, 1, -3)
    assert w * w.conj() == Q(1, 0, -3)
    assert Q(1, 1, -1) ** 2 == Q(0, 2, -1)
    w19 = Q(0, 1, -19)
    assert w19 * w19 == w19 - 5
    assert ring_arithmetic("neg", Q(1, 2, -7)) == Q(-1, -2, -7)


def test_division_examples():
    assert exact_divide(Q(0, 2, -1), Q(1, 1, -1)) == Q(1, 1, -1)
    with pytest.raises(NotDivisible):
        exact_divide(Q(3, 0, -1), Q(1, 1, -1))
    w = Q(0, 1, -7)
    assert w.norm() == 2 and exact_divide(Q(2, 0, -7), w) == w.conj()
    assert not divides(Q(1, 1, -1), Q(3, 0, -1))


def test_nearest_quotient_example():
    m, n = Q(7, 3, -1), Q(2, 1, -1)
    q = nearest_quotient(m, n)
    assert q == Q(3, 0, -1)
    assert m - q * n == Q(1, 0, -1)


def test_field_mismatch():
    with pytest.raises(FieldMismatch):
        Q(1, 1, -1) + Q(1, 1, -3)


def test_canonical_text_roundtrip():
    for d in FIELDS:
        n = Q(-3, 7, d)
        assert QuadInt.parse(str(n)) == n
    assert str(Q(3, -2, -1)) == "3-2*w@-1"
    with pytest.raises(ValueError):
        QuadInt.parse("3+2i")


def test_trace_over_sqrt_disc_gaussian():
    z = QuadRat.quotient(Q(1, 0, -1), Q(1, 1, -1))
    # 1/(1+i) = (1-i)/2, so z/(2i) = (-1-i)/4 has trace -1/2
    assert z.trace_over_sqrt_disc() == -0.5


elems = st.builds(lambda a, b: (a, b), st.integers(-10**6, 10**6), st.integers(-10**6, 10**6))


@given(st.sampled_from(FIELDS), elems, elems)
def test_norm_multiplicative_and_embedding(d, x, y):
    m, n = Q(*x, d), Q(*y, d)
    assert (m * n).norm() == m.norm() * n.norm()
    assert m * n.conj() + n * m.conj() == Q((m * n.conj()).trace(), 0, d)
    z = m.to_complex() * n.to_complex()
    assert abs((m * n).to_complex() - z) <= 1e-9 * max(1.0, abs(z))


@given(st.sampled_from(FIELDS), elems, elems)
def test_exact_divide_inverts_multiplication(d, x, y):
    m, n = Q(*x, d), Q(*y, d)
    if n:
        assert exact_divide(m * n, n) == m


@given(st.sampled_from((-1, -2, -3, -7, -11)), elems, elems)
def test_nearest_quotient_descends_in_euclidean_fields(d, x, y):
    m, n = Q(*x, d), Q(*y, d)
    if n:
        assert (m - nearest_quotient(m, n) * n).norm() < n.norm()


def test_nearest_quotient_bound_d163():
    import random
    rng = random.Random(7)
    w = abs(omega_complex(-163))
    bound = (0.5 + w / 2) ** 2
    for _ in range(1000):
        m = Q(rng.randint(-500, 500), rng.randint(-500, 500), -163)
        n = Q(rng.randint(-50, 50), rng.randint(1, 50), -163)
        r = m - nearest_quotient(m, n) * n
        assert r.norm() / n.norm() <= bound + 1e-12
