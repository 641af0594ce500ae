import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dedekind_symbols.catalog import get_group
from dedekind_symbols.classical import dede_s
from dedekind_symbols.congruence import CongruenceModel, random_gamma0_element
from dedekind_symbols.groups import parse_word
from dedekind_symbols.laws import (
    PRINTED_LAWS,
    dieter_defect,
    fricke_defects,
    hecke_lambda,
    hh0_rhs,
    hid2q_defect,
    homogenization_check,
    involution_checks,
    printed_law_defect,
    rec_rhs,
    three_term_defect,
    two_term_defect,
)
from dedekind_symbols.matrices import GMat
from dedekind_symbols.quadratic import QuadVal
from dedekind_symbols.symbols import Element, SymbolValue, WordModel
from dedekind_symbols.sweeps import random_word

M11 = WordModel(get_group("gamma0_11"))
M37 = WordModel(get_group("g37plus"))
MSL = WordModel(get_group("sl2z"))
seeds = st.integers(0, 10**6)


def el(model, text):
    return model.element(parse_word(text))


def zero(v: SymbolValue, tol=0.0):
    return v.is_zero(tol)


def test_three_term_examples():
    s0 = el(MSL, "S0")
    h, hs = three_term_defect(MSL, s0, el(MSL, "Pinf*S0"))
    assert zero(h) and hs is None
    h, hs = three_term_defect(M11, el(M11, "Q"), el(M11, "R"))
    assert zero(h) and zero(hs)


def test_three_term_precondition():
    with pytest.raises(ValueError):
        three_term_defect(M11, el(M11, "Pinf"), el(M11, "Q"))
    # S0 * S0 = -I has c = 0
    with pytest.raises(ValueError):
        three_term_defect(MSL, el(MSL, "S0"), el(MSL, "S0"))


@given(st.integers(2, 25), seeds)
def test_three_term_and_dieter_on_congruence_groups(N, seed):
    rng = random.Random(seed)
    model = CongruenceModel(N)
    g = Element(random_gamma0_element(N, rng, 120, 2))
    t = Element(random_gamma0_element(N, rng, 120, 2))
    if g.matrix.c * t.matrix.c * (g @ t).matrix.c == 0:
        return
    assert zero(three_term_defect(model, g, t, star=False)[0])
    assert zero(dieter_defect(model, g, t, star=False)[0])


@given(seeds)
def test_three_term_star_on_gamma0_11_words(seed):
    rng = random.Random(seed)
    names = ["Pinf", "P0", "Q", "R", "negI"]
    g, t = M11.element(random_word(rng, names, 6)), M11.element(random_word(rng, names, 6))
    if g.matrix.c * t.matrix.c * (g @ t).matrix.c == 0:
        return
    h, hs = three_term_defect(M11, g, t)
    assert zero(h) and zero(hs)
    h, hs = dieter_defect(M11, g, t)
    assert zero(h) and zero(hs)


@given(seeds)
def test_two_term_with_elliptic_tau_on_g37(seed):
    rng = random.Random(seed)
    names = ["Pinf", "w", "eps1", "eps2", "eps3"]
    tau = el(M37, rng.choice(["w", "eps1", "eps2", "eps3"]))
    g = M37.element(random_word(rng, names, 6))
    if g.matrix.c == 0 or (g @ tau).matrix.c == 0:
        return
    out = two_term_defect(M37, g, tau)
    assert zero(out["recip2a"]) and zero(out["recip3"]) and zero(out["recip2b"])


@given(seeds)
def test_two_term_with_parabolic_tau_on_gamma0_11(seed):
    rng = random.Random(seed)
    k = rng.choice([-2, -1, 1, 2, 3])
    tau = el(M11, f"P0^{k}")
    g = M11.element(random_word(rng, ["Pinf", "P0", "Q", "R"], 6))
    if g.matrix.c == 0 or (g @ tau).matrix.c == 0:
        return
    out = two_term_defect(M11, g, tau, reduced=True)
    assert all(zero(v) for v in out.values())
    h = hid2q_defect(M11, g, tau, 11, k)
    if h is not None:
        assert zero(h)


def test_fricke_laws_on_g37():
    lam = QuadVal.sqrt(37)
    w = el(M37, "w")
    for text in ["eps1", "eps3*Pinf", "eps2*Pinf^-2*eps1", "Pinf^3*eps3^-1"]:
        out = fricke_defects(M37, el(M37, text), w, lam)
        assert all(v is None or zero(v) for v in out.values())


def test_hh0_coefficient_from_divisor_sum():
    # sigma(37)/(12*2) = 38/24 = 19/12
    assert hh0_rhs(37, 37, 1, 1).value == Fraction(19, 12) * (1 + Fraction(1, 37) + 1) - Fraction(1, 4)


@pytest.mark.parametrize("name", sorted(PRINTED_LAWS))
def test_printed_laws(name):
    law = PRINTED_LAWS[name]
    model = WordModel(get_group(law.group))
    ctx = model.ctx
    pool = ctx.seed_theta if law.star else ctx.seed_S
    names = [n for n in ctx.generators if n in pool]
    tol = 0.0 if ctx.exact else 1e-10
    rng = random.Random(name)
    hits = 0
    for _ in range(200):
        g = model.element(random_word(rng, names, 6))
        dft = printed_law_defect(model, law, g)
        if dft is None:
            continue
        hits += 1
        assert dft.is_zero(tol), (name, g.label(), str(dft))
        try:
            direct = printed_law_defect(model, law, g, direct=True)
        except ValueError:
            continue
        assert direct.is_zero(tol)
    assert hits >= 10


def test_hecke_lambda_exact_cases():
    assert hecke_lambda(3) == 1
    assert hecke_lambda(4) * hecke_lambda(4) == 2
    assert hecke_lambda(6) * hecke_lambda(6) == 3
    assert abs(float(hecke_lambda(5)) - 1.618033988749895) < 1e-15


def test_rec_q3_is_classical_reciprocity():
    for c, d in [(3, 2), (7, 5), (137, 120)]:
        assert dede_s(d, c) + dede_s(c, d) == rec_rhs(3, c, d).value


@given(seeds)
def test_involutions_gamma0_11(seed):
    rng = random.Random(seed)
    g = M11.element(random_word(rng, ["Pinf", "P0", "Q", "R", "negI"], 8))
    out = involution_checks(M11, g, rng.randint(-4, 4), rng.randint(-4, 4))
    assert {"inverse", "translation", "negation", "iota", "inverse*", "iota*"} <= set(out)
    assert all(zero(v) for v in out.values())


@given(seeds)
def test_involutions_sl2z(seed):
    rng = random.Random(seed)
    g = MSL.element(random_word(rng, ["Pinf", "S0"], 10))
    out = involution_checks(MSL, g)
    assert all(zero(v) for v in out.values())


def test_involutions_at_identity():
    for model in (M11, MSL, M37):
        out = involution_checks(model, model.element(()))
        assert all(zero(v) for v in out.values())


def test_homogenization_q():
    rows = homogenization_check(M11, el(M11, "Q"), 50)
    for row in rows:
        assert zero(row.defect)
        assert abs(row.ratio_error.value) <= row.bound.value
    assert rows[0].hstar.value == Fraction(3, 10) + Fraction(-4, 22)


def test_homogenization_parabolic_decay():
    rows = homogenization_check(M11, el(M11, "P0"), 20)
    for row in rows:
        n = row.n
        # H*(P0^n) = A * 2 / (11 n)
        assert row.hstar.value == Fraction(2, 11 * n)


def test_homogenization_rejects_translations():
    with pytest.raises(ValueError):
        homogenization_check(M11, el(M11, "Pinf"), 3)


def test_congruence_model_two_term():
    model = CongruenceModel(11)
    g = Element(GMat(-7, -1, 22, 3))
    t = Element(GMat(4, 1, -33, -8))
    assert zero(two_term_defect(model, g, t)["recip2a"])
