import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dedekind_symbols.classical import dede_s
from dedekind_symbols.congruence import (
    CongruenceModel,
    complete_bottom_row,
    h_gamma0,
    level_data,
    mobius,
    mobius_identity_defect,
    periodicity0_defect,
    random_bottom_row,
    random_gamma0_element,
    vassileva_S,
)
from dedekind_symbols.groups import a_from_signature
from dedekind_symbols.matrices import GMat, mat_mul
from dedekind_symbols.phase import omega
from dedekind_symbols.symbols import Element

levels = st.integers(1, 25)
seeds = st.integers(0, 10**6)


def test_level_data_examples():
    ld = level_data(1)
    assert (ld.alpha, ld.beta, ld.A) == (1, 1, Fraction(1, 12))
    assert level_data(11).A == 1
    assert level_data(12).beta == 2 and level_data(12).A == 2


@pytest.mark.parametrize("N, sig", [(2, (0, 2, (2,))), (3, (0, 2, (3,))), (11, (1, 2, ())), (37, (2, 2, (2, 2, 3, 3)))])
def test_level_constant_matches_gauss_bonnet(N, sig):
    assert level_data(N).A == a_from_signature(*sig)


def test_mobius_values():
    assert [mobius(n) for n in range(1, 13)] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0]


def test_vassileva_on_generators():
    assert vassileva_S(GMat(1, 1, 0, 1), 11) == 1
    assert vassileva_S(GMat(1, 0, 11, 1), 11) == 0
    assert vassileva_S(GMat(-7, -1, 22, 3), 11) == Fraction(-2, 5)
    assert vassileva_S(GMat(4, 1, -33, -8), 11) == Fraction(2, 5)
    with pytest.raises(ValueError):
        vassileva_S(GMat(0, -1, 1, 0), 11)


def test_h_examples():
    assert h_gamma0(1, 0, 5) == 0
    assert h_gamma0(1, 11, 11) == Fraction(-3, 44)
    with pytest.raises(ValueError):
        h_gamma0(2, 12, 11)


def test_h_level_one_is_signed_dedekind_sum():
    for c in range(-120, 121):
        if c == 0:
            continue
        for d in range(-abs(c), abs(c) + 1):
            if math.gcd(c, d) == 1:
                assert h_gamma0(d, c, 1) == (1 if c > 0 else -1) * dede_s(d, abs(c))


@given(levels, seeds)
def test_h_periodic_in_d(N, seed):
    c, d = random_bottom_row(N, random.Random(seed), 300)
    assert h_gamma0(d + c, c, N) == h_gamma0(d, c, N)


@given(levels, seeds)
def test_vassileva_cocycle(N, seed):
    rng = random.Random(seed)
    g = random_gamma0_element(N, rng, 150, 2)
    t = random_gamma0_element(N, rng, 150, 2)
    assert vassileva_S(mat_mul(g, t), N) == vassileva_S(g, N) + vassileva_S(t, N) + omega(g, t)


@given(levels, seeds)
def test_definition_agrees_with_finite_sum(N, seed):
    g = random_gamma0_element(N, random.Random(seed), 150, 2)
    if g.c != 0:
        model = CongruenceModel(N)
        assert model.H(Element(g)).value == h_gamma0(int(g.d), int(g.c), N)


@given(levels, seeds)
def test_completion_choice_is_immaterial(N, seed):
    rng = random.Random(seed)
    c, d = random_bottom_row(N, rng, 300)
    g = complete_bottom_row(c, d)
    k = rng.randint(-5, 5)
    shifted = GMat(g.a + k * g.c, g.b + k * g.d, g.c, g.d)
    model = CongruenceModel(N)
    assert model.H(Element(shifted)).value == model.H(Element(g)).value


@pytest.mark.parametrize("N, c, d, k", [(11, 11, 1, 1), (2, 2, 1, 1), (30, 60, 7, 3)])
def test_mobius_identity_examples(N, c, d, k):
    assert mobius_identity_defect(N, c, d, k) == 0


@pytest.mark.parametrize("N, d, c, k", [(11, 1, 11, 1), (14, 3, 14, 2), (11, 1, 11, 0)])
def test_periodicity_examples(N, d, c, k):
    assert periodicity0_defect(N, d, c, k) == 0


def test_complete_bottom_row_is_canonical():
    g = complete_bottom_row(22, 3)
    assert g.c == 22 and g.d == 3 and 0 <= g.a < 22
    with pytest.raises(ValueError):
        complete_bottom_row(4, 2)
