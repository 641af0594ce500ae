import cmath
import math

import mpmath
import numpy as np
import pytest

from dedekind_symbols.catalog import get_group
from dedekind_symbols.eta import (
    F11,
    CalibrationError,
    EtaPairing,
    EtaProduct,
    ModSymVal,
    calibrate_Vf,
    eta_q_expansion,
    modsym,
    naive_eta_expansion,
    pentagonal_exponents,
    truncation_for,
)
from dedekind_symbols.groups import eval_word, parse_word
from dedekind_symbols.matrices import GMat, mat_mul

G11 = get_group("gamma0_11")


def test_f11_coefficients():
    s = eta_q_expansion(F11, 15)
    assert s.offset == 1
    assert list(s.coeffs) == [1, -2, -1, 2, 1, 2, -2, 0, -2, -2, 1, -2, 4, 4, -1]
    assert F11.weight == 2


@pytest.mark.parametrize(
    "product", [F11, EtaProduct(((1, 1),)), EtaProduct(((1, -1),)), EtaProduct(((2, 3), (1, -2))), EtaProduct(((1, 24),))]
)
def test_expansion_matches_naive_product(product):
    assert list(eta_q_expansion(product, 80).coeffs) == naive_eta_expansion(product, 80)


def _partition_counts(n_max):
    """p(n) by the coin-change recursion over part sizes."""
    p = [1] + [0] * (n_max - 1)
    for part in range(1, n_max):
        for n in range(part, n_max):
            p[n] += p[n - part]
    return p


def test_eta_pentagonal_and_partitions():
    eta = eta_q_expansion(EtaProduct(((1, 1),)), 60)
    penta = dict(pentagonal_exponents(60))
    for k, a in enumerate(eta.coeffs):
        assert a == penta.get(k, 0)
    inv = eta_q_expansion(EtaProduct(((1, -1),)), 30).coeffs
    assert _partition_counts(len(inv)) == list(inv)


def test_delta_is_ramanujan_tau():
    tau = eta_q_expansion(EtaProduct(((1, 24),)), 6).cusp_coefficients()
    assert list(tau[1:7]) == [1, -24, 252, -1472, 4830, -6048]


def test_coefficients_obey_hasse_bound():
    a = eta_q_expansion(F11, 5000).cusp_coefficients()
    n = np.arange(len(a))
    # |a_n| <= d(n) sqrt(n) <= 2 sqrt(n) n^(1/3) is plenty; the engine needs |a_n| <= n
    assert np.all(np.abs(a[1:]) <= n[1:])
    primes = [p for p in range(2, 500) if all(p % q for q in range(2, int(p**0.5) + 1))]
    assert all(abs(a[p]) <= 2 * math.sqrt(p) for p in primes)


def test_f11_is_multiplicative_at_primes():
    a = eta_q_expansion(F11, 200).cusp_coefficients()
    # a_{mn} = a_m a_n for coprime m, n
    for m, n in [(2, 3), (2, 5), (3, 7), (5, 13), (4, 9)]:
        assert a[m * n] == a[m] * a[n]


def test_non_integral_offset_rejected():
    with pytest.raises(ValueError):
        eta_q_expansion(EtaProduct(((1, 1),)), 10).cusp_coefficients()


def test_truncation_rule():
    for c in (11, 22, 121, 1000):
        T = truncation_for(c, 1e-13)
        r = math.exp(-2 * math.pi / c)
        assert 2 * r ** (T + 1) / (1 - r) <= 1e-13
        assert 2 * r**T / (1 - r) > 1e-13


def _direct_modsym(gamma: GMat, T: int = 3000):
    """Sum of a_n/n (e(n gamma z0) - e(n z0)) in mpmath at the base point z0 = (-d+i)/c."""
    a_n = eta_q_expansion(F11, T).cusp_coefficients()
    a, b, c, d = (int(e) for e in gamma.entries)
    if c < 0:
        a, b, c, d = -a, -b, -c, -d
    z0 = mpmath.mpc(-d, 1) / c
    gz0 = (a * z0 + b) / (c * z0 + d)
    tot = mpmath.mpc(0)
    for n in range(1, T + 1):
        tot += a_n[n] / mpmath.mpf(n) * (mpmath.exp(2j * mpmath.pi * n * gz0) - mpmath.exp(2j * mpmath.pi * n * z0))
    return complex(tot)


@pytest.mark.parametrize("text", ["Q", "R", "Q*R", "R^-1*Q"])
def test_modsym_matches_direct_mpmath_series(text):
    g = eval_word(G11, parse_word(text))
    val = modsym(g)
    assert abs(val.value - _direct_modsym(g)) < 1e-10


def test_generator_symbols():
    q, r = modsym(eval_word(G11, (("Q", 1),))), modsym(eval_word(G11, (("R", 1),)))
    assert q.value == pytest.approx(complex(-0.634604652139779, -1.4588166169385), abs=1e-11)
    assert abs(r.value - q.value.conjugate()) < 1e-11


def test_parabolic_symbols_vanish():
    for g in (GMat(1, 0, 11, 1), GMat(1, 0, -33, 1), GMat(1, 5, 0, 1)):
        v = modsym(g)
        assert abs(v.value) <= v.error + 1e-12


def test_additivity_across_products():
    words = ["Q", "R", "Q*P0", "R^-1*P0^2", "Q*R*Q"]
    for u in words:
        for v in words:
            mu, mv = eval_word(G11, parse_word(u)), eval_word(G11, parse_word(v))
            lhs = modsym(mat_mul(mu, mv))
            rhs = modsym(mu) + modsym(mv)
            assert abs(lhs.value - rhs.value) <= lhs.error + rhs.error + 1e-12


def test_error_includes_tail_and_rounding():
    g = eval_word(G11, (("Q", 1),))
    coarse, fine = modsym(g, T=20), modsym(g)
    assert coarse.error > fine.error
    assert abs(coarse.value - fine.value) <= coarse.error + fine.error


def test_calibration_value():
    p = EtaPairing(G11)
    assert p.Vf == pytest.approx(1.6967424444, abs=1e-9)
    assert p.Vf_error < 1e-11


def test_calibration_rejects_degenerate_pair():
    z = ModSymVal(1 + 1j, 1e-14)
    with pytest.raises(CalibrationError):
        calibrate_Vf(z, z)


def test_pairing_is_antisymmetric_and_kills_parabolics():
    p = EtaPairing(G11)
    u, v = parse_word("Q*R^2"), parse_word("R*Q^-1*P0")
    assert float(p.pair(u, v)) == pytest.approx(-float(p.pair(v, u)), abs=1e-12)
    assert abs(float(p.pair(u, (("P0", 3),)))) < 1e-11
    assert abs(float(p.pair((("Pinf", 1),), v))) < 1e-11
    assert float(p.pair((("Q", 1),), (("R", 1),))) == pytest.approx(0.5, abs=1e-11)


def test_phase_uses_exact_residues():
    """Huge c with small |a|, |d|: exact residues keep the phases accurate."""
    g = eval_word(G11, parse_word("Q*R*Q*R*Q"))
    val = modsym(g)
    ref = modsym(eval_word(G11, (("Q", 3),))) + modsym(eval_word(G11, (("R", 2),)))
    assert abs(val.value - ref.value) < 1e-9
    assert cmath.isfinite(val.value)
