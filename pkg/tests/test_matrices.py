import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dedekind_symbols.congruence import complete_bottom_row, random_gamma0_element
from dedekind_symbols.matrices import (
    GMat,
    gamma0_member,
    gamma0plus_member,
    identity_like,
    iota,
    mat_inv,
    mat_mul,
    mat_neg,
    scaled_matrix,
)
from dedekind_symbols.quadratic import QuadVal

I = GMat(1, 0, 0, 1)
P0 = GMat(1, 0, 11, 1)
Q = GMat(-7, -1, 22, 3)
R = GMat(4, 1, -33, -8)


def test_determinant_enforced():
    with pytest.raises(ValueError):
        GMat(1, 1, 1, 1)


def test_inverse_and_identity():
    assert mat_inv(I) == I
    for m in (P0, Q, R):
        assert mat_mul(m, mat_inv(m)) == I
        assert mat_inv(m) == GMat(m.d, -m.b, -m.c, m.a)


def test_fricke_square_is_minus_identity():
    for p in (2, 5, 37):
        w = scaled_matrix(0, -1, p, 0, p)
        assert mat_mul(w, w) == mat_neg(identity_like(w))


def test_gamma0_11_relation():
    Pinf = GMat(1, 1, 0, 1)
    m = I
    for g in (Q, R, mat_inv(Q), mat_inv(R), mat_inv(P0), Pinf):
        m = mat_mul(m, g)
    assert m == I


def test_gamma0_membership_examples():
    assert gamma0_member(P0, 11)
    assert not gamma0_member(GMat(0, -1, 1, 0), 11)
    assert gamma0_member(Q, 11)


def test_gamma0_member_rejects_irrational_entries():
    with pytest.raises((TypeError, ValueError)):
        gamma0_member(scaled_matrix(0, -1, 37, 0, 37), 37)


@given(st.integers(1, 30), st.integers(0, 10**6))
def test_gamma0_subgroup_closure(N, seed):
    rng = random.Random(seed)
    g = random_gamma0_element(N, rng, 100, 2)
    t = random_gamma0_element(N, rng, 100, 2)
    assert gamma0_member(mat_mul(g, t), N)
    assert gamma0_member(mat_inv(g), N)


def test_gamma0plus_examples():
    eps1 = GMat(6, -1, 37, -6)
    eps2 = scaled_matrix(37, -19, 74, -37, 37)
    assert gamma0plus_member(eps2, 37) == 37
    assert gamma0plus_member(I, 37) == 1
    assert gamma0plus_member(eps1, 37) == 1


def _random_37plus(rng):
    """A random element of Gamma_0(37)+ with known scale."""
    c, d = 37 * rng.randint(1, 20) * rng.choice((1, -1)), rng.randint(-200, 200)
    while math.gcd(c, d) != 1:
        d += 1
    g = complete_bottom_row(c, d)
    if rng.random() < 0.5:
        return g, 1
    return mat_mul(g, scaled_matrix(0, -1, 37, 0, 37)), 37


@given(st.integers(0, 10**6))
def test_gamma0plus_scale_multiplies(seed):
    rng = random.Random(seed)
    (g1, e1), (g2, e2) = _random_37plus(rng), _random_37plus(rng)
    e = gamma0plus_member(mat_mul(g1, g2), 37)
    assert gamma0plus_member(g1, 37) == e1
    assert e == e1 * e2 // math.gcd(e1, e2) ** 2


def test_iota():
    assert iota(I) == I
    assert iota(GMat(1, 1, 0, 1)) == GMat(1, -1, 0, 1)
    for m in (Q, R, scaled_matrix(37, -19, 74, -37, 37)):
        assert iota(iota(m)) == m
        assert iota(mat_mul(m, Q)) == mat_mul(iota(m), iota(Q))


def test_quadratic_entries_multiply_exactly():
    w = scaled_matrix(0, -1, 37, 0, 37)
    assert w.c == QuadVal(0, 1, 37)
    assert mat_mul(w, mat_inv(w)) == identity_like(w)
