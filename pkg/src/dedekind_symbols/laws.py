"""Transformation laws of H and H* as defect functions.

Every ``*_defect`` returns left side minus right side as a SymbolValue; the
law holds when the defect is zero (exactly, or within tolerance for
approximate values).  ``None`` marks a variant that does not apply.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .congruence import divisors, prime_divisors
from .quadratic import FLOAT_CTX, QuadVal, qsign
from .symbols import (
    Element,
    MissingSeed,
    PairingUnavailable,
    SymbolModel,
    SymbolValue,
    lift,
)

__all__ = [
    "three_term_rhs",
    "three_term_defect",
    "dieter_defect",
    "two_term_defect",
    "involution_checks",
    "homogenization_check",
    "HomogenizationRow",
    "der1_rhs",
    "der2_rhs",
    "hid2q_rhs",
    "hh0_rhs",
    "hh1_rhs",
    "hh2_rhs",
    "hh3_rhs",
    "hh_star_rhs",
    "l_star_rhs",
    "q11_rhs",
    "q11_star_rhs",
    "rec_rhs",
    "hecke_lambda",
    "sigma",
    "PrintedLaw",
    "printed_law_defect",
    "PRINTED_LAWS",
    "fricke_defects",
    "hid2q_defect",
    "hid_star_defect",
]


def _c(el: Element):
    return el.matrix.c


def _d(el: Element):
    return el.matrix.d


def _sgn(x) -> int:
    return qsign(x.value if isinstance(x, SymbolValue) else x)


def _abs(v):
    return -v if qsign(v) < 0 else v


def _require_nonzero(*cs) -> None:
    if any(qsign(c) == 0 for c in cs):
        raise ValueError("law needs nonzero bottom-left entries")


def _optional(fn):
    try:
        return fn()
    except (MissingSeed, PairingUnavailable):
        return None


# -- three-term laws ---------------------------------------------------------


def three_term_rhs(A, c1, c2, c3) -> SymbolValue:
    """-A (c1/(c2 c3) + c2/(c1 c3) + c3/(c1 c2))."""
    c1, c2, c3 = lift(c1), lift(c2), lift(c3)
    return -lift(A) * (c1 / (c2 * c3) + c2 / (c1 * c3) + c3 / (c1 * c2))


def three_term_defect(model: SymbolModel, g: Element, t: Element, star: bool = True):
    """(H-defect, H*-defect) for H(gt) - H(g) - H(t); H*-defect is None if unavailable."""
    gt = model.mul(g, t)
    cg, ct, cgt = _c(g), _c(t), _c(gt)
    _require_nonzero(cg, ct, cgt)
    base = three_term_rhs(model.A, cg, ct, cgt)
    sign = qsign(cg) * qsign(ct) * qsign(cgt)
    h = model.H(gt) - model.H(g) - model.H(t) - (base + Fraction(sign, 4))
    hs = None
    if star:
        hs = _optional(
            lambda: model.Hstar(gt) - model.Hstar(g) - model.Hstar(t)
            - (base + model.pairing(g, t))
        )
    return h, hs


def dieter_defect(model: SymbolModel, g1: Element, g2: Element, star: bool = True):
    """Symmetric three-term form for g1 g2 g3 = I with g3 = (g1 g2)^-1."""
    g3 = model.inv(model.mul(g1, g2))
    c1, c2, c3 = _c(g1), _c(g2), _c(g3)
    _require_nonzero(c1, c2, c3)
    base = three_term_rhs(model.A, c1, c2, c3)
    sign = qsign(c1) * qsign(c2) * qsign(c3)
    h = model.H(g1) + model.H(g2) + model.H(g3) - (base + Fraction(sign, 4))
    hs = None
    if star:
        hs = _optional(
            lambda: model.Hstar(g1) + model.Hstar(g2) + model.Hstar(g3)
            - (base - model.pairing(g1, g2))
        )
    return h, hs


# -- two-term laws -------------------------------------------------------------


def _two_term_a_part(A, g: Element, t: Element, gt: Element) -> SymbolValue:
    cg, ct, cgt = lift(_c(g)), lift(_c(t)), lift(_c(gt))
    dg, dgt = lift(_d(g)), lift(_d(gt))
    return lift(A) * (dg / cg - dgt / cgt + ct / (cg * cgt))


def two_term_defect(
    model: SymbolModel, g: Element, t: Element, reduced: bool | None = None
) -> dict[str, SymbolValue | None]:
    """Defects of the two-term laws for the pair (g, t).

    ``recip2a`` is the H law, ``recip3`` the H* law with theta(t) and the
    pairing, ``recip2b`` the reduced H* law valid when t is elliptic, or
    parabolic fixing a cusp not equivalent to infinity.  ``reduced=None``
    applies the reduced law to elliptic t only.
    """
    gt = model.mul(g, t)
    cg, ct, cgt = _c(g), _c(t), _c(gt)
    _require_nonzero(cg, ct, cgt)
    a_part = _two_term_a_part(model.A, g, t, gt)
    sign = Fraction(qsign(ct) - qsign(cg) * qsign(ct) * qsign(cgt), 4)
    out: dict[str, SymbolValue | None] = {}
    out["recip2a"] = _optional(
        lambda: model.H(g) - model.H(gt) - (a_part + model.S(t) + sign)
    )
    out["recip3"] = _optional(
        lambda: model.Hstar(g) - model.Hstar(gt)
        - (a_part - model.theta(t) - model.pairing(g, t))
    )
    if reduced is None:
        reduced = t.matrix.kind() == "elliptic"
    out["recip2b"] = (
        _optional(lambda: model.Hstar(g) - model.Hstar(gt) - a_part) if reduced else None
    )
    return out


# -- involutions and invariance ------------------------------------------------


def involution_checks(model: SymbolModel, g: Element, k: int = 1, m: int = -2):
    """Defects of the sign, iota, inverse and translation-invariance lemmas.

    Keys ending in ``*`` are the H* analogues; checks that do not apply
    to the model (no -I, iota not closed, no theta) are omitted.
    """
    out: dict[str, SymbolValue] = {}
    funcs = [("", model.H)]
    try:
        model.Hstar(g)
        funcs.append(("*", model.Hstar))
    except (MissingSeed, PairingUnavailable):
        pass
    inv = model.inv(g)
    shifted = model.mul(model.mul(model.translation(k), g), model.translation(m))
    neg = model.neg(g) if model.has_minus_identity() else None
    io = None
    if model.iota_closed():
        try:
            io = model.iota(g)
        except ValueError:
            io = None
    for suffix, H in funcs:
        base = H(g)
        out["inverse" + suffix] = H(inv) + base
        out["translation" + suffix] = H(shifted) - base
        if neg is not None:
            out["negation" + suffix] = H(neg) - base
        if io is not None:
            out["iota" + suffix] = H(io) + base
    return out


@dataclass(frozen=True)
class HomogenizationRow:
    n: int
    hstar: SymbolValue
    closed_form: SymbolValue
    defect: SymbolValue
    ratio_error: SymbolValue
    bound: SymbolValue


def homogenization_check(model: SymbolModel, tau: Element, n_max: int):
    """H*(tau^n) against n theta(tau) + A (a_n + d_n)/c_n, and |H*/n - theta| <= 2A|tr|/(|c_1| n)."""
    if qsign(_c(tau)) == 0:
        raise ValueError("tau lies in the stabiliser of infinity")
    theta1 = model.theta(tau)
    c1 = lift(_abs(_c(tau)))
    tr_abs = lift(_abs(tau.matrix.trace()))
    rows = []
    power = tau
    for n in range(1, n_max + 1):
        if n > 1:
            power = model.mul(power, tau)
        m = power.matrix
        hstar = model.Hstar(power)
        closed = n * theta1 + lift(model.A) * lift(m.a + m.d) / lift(m.c)
        ratio_err = hstar / n - theta1
        bound = 2 * lift(model.A) * tr_abs / (c1 * n)
        rows.append(HomogenizationRow(n, hstar, closed, hstar - closed, ratio_err, bound))
    return rows


# -- printed closed forms -------------------------------------------------------


def sigma(n: int) -> int:
    return sum(divisors(n))


def hecke_lambda(q: int):
    """lambda_q = 2 cos(pi/q): exact for q in {3, 4, 6}, 50-digit mpf otherwise."""
    if q == 3:
        return Fraction(1)
    if q == 4:
        return QuadVal(0, 1, 2)
    if q == 6:
        return QuadVal(0, 1, 3)
    return 2 * FLOAT_CTX.cos(FLOAT_CTX.pi / q)


def der1_rhs(A, lam, c, d) -> SymbolValue:
    """A (d/c + c/(d lam^2) + 1/(cd)) - sgn(cd)/4."""
    return der2_rhs(A, lam, c, d) - Fraction(_sgn(c) * _sgn(d), 4)


def der2_rhs(A, lam, c, d) -> SymbolValue:
    c, d, lam = lift(c), lift(d), lift(lam)
    return lift(A) * (d / c + c / (d * lam * lam) + 1 / (c * d))


def hid2q_rhs(A, N: int, k: int, c, d) -> SymbolValue:
    c, d = lift(c), lift(d)
    return lift(A) * (k * N * (d * d + 1)) / (c * (c + k * N * d))


def hh0_rhs(N: int, p: int, c, d) -> SymbolValue:
    """sigma(N)/(12 2^r) (d/c + c/(pd) + 1/(cd)) - 1/4, for cd > 0."""
    r = len(prime_divisors(N))
    coeff = Fraction(sigma(N), 12 * 2**r)
    c, d = lift(c), lift(d)
    return coeff * (d / c + c / (p * d) + 1 / (c * d)) - Fraction(1, 4)


_C37 = Fraction(19, 12)


def hh1_rhs(c, d) -> SymbolValue:
    c, d = lift(c), lift(d)
    return _C37 * (d / c + (c + 6 * d) / (6 * c + 37 * d) + 37 / (c * (6 * c + 37 * d))) - Fraction(1, 4)


def hh2_rhs(c, d) -> SymbolValue:
    c, d = lift(c), lift(d)
    return _C37 * (
        d / c + (19 * c + 37 * d) / (37 * (c + 2 * d)) + 2 / (c * (c + 2 * d))
    ) - Fraction(1, 4)


def hh3_rhs(c, d) -> SymbolValue:
    c, d = lift(c), lift(d)
    return _C37 * (
        d / c + (3 * c + 10 * d) / (11 * c + 37 * d) + 37 / (c * (11 * c + 37 * d))
    ) - Fraction(1, 6)


_HH_CONST = {"hh0": Fraction(1, 4), "hh1": Fraction(1, 4), "hh2": Fraction(1, 4), "hh3": Fraction(1, 6)}


def hh_star_rhs(law: str, c, d) -> SymbolValue:
    """The H* version: the same right side without the constant 1/4 or 1/6."""
    base = {"hh0": lambda: hh0_rhs(37, 37, c, d), "hh1": lambda: hh1_rhs(c, d),
            "hh2": lambda: hh2_rhs(c, d), "hh3": lambda: hh3_rhs(c, d)}[law]()
    return base + _HH_CONST[law]


def l_star_rhs(c, d) -> SymbolValue:
    """H*(d,c) + H*(...) for tau = L, without the pairing term."""
    c, d = lift(c), lift(d)
    return _C37 * (
        d / c + (89 * c + 111 * d) / (37 * (4 * c + 5 * d)) + 5 / (c * (4 * c + 5 * d))
    ) + Fraction(19, 24)


def q11_rhs(c, d) -> SymbolValue:
    c, d = lift(c), lift(d)
    e = 22 * d - 7 * c
    sign = _sgn(c) * _sgn(e)
    return (d / c + (c - 3 * d) / e + 22 / (c * e)) - Fraction(2, 5) + Fraction(1 - sign, 4)


def q11_star_rhs(c, d) -> SymbolValue:
    """Without the pairing term."""
    c, d = lift(c), lift(d)
    e = 22 * d - 7 * c
    return (d / c + (c - 3 * d) / e + 22 / (c * e)) - Fraction(3, 10)


def rec_rhs(q: int, c, d) -> SymbolValue:
    lam = lift(hecke_lambda(q))
    c, d = lift(c), lift(d)
    return Fraction(q - 2, 4 * q) * (d / c + c / (d * lam * lam) + 1 / (c * d)) - Fraction(1, 4)


@dataclass(frozen=True)
class PrintedLaw:
    """A law in printed closed form: lhs(g) = H(g) + H(-iota(g tau)) = rhs(c, d).

    ``mode`` is "reflect" when the printed partner is H(-iota(g tau)), which
    equals -H(g tau) by the sign and iota lemmas, and "shift" when it is
    -H(g tau) directly.
    """

    name: str
    group: str
    tau: str
    star: bool
    rhs: Callable
    condition: Callable
    pairing_term: bool = False
    mode: str = "reflect"


def _cd_pos(c, d) -> bool:
    return qsign(c) * qsign(d) > 0


def _make_laws() -> dict[str, PrintedLaw]:
    laws = [
        PrintedLaw("hh0", "g37plus", "w", False, lambda c, d: hh0_rhs(37, 37, c, d), _cd_pos),
        PrintedLaw("hh1", "g37plus", "eps1", False, hh1_rhs, _cd_pos),
        PrintedLaw("hh2", "g37plus", "eps2", False, hh2_rhs, _cd_pos),
        PrintedLaw("hh3", "g37plus", "eps3", False, hh3_rhs, _cd_pos),
        PrintedLaw("hh0*", "g37plus", "w", True, lambda c, d: hh_star_rhs("hh0", c, d), _cd_pos),
        PrintedLaw("hh1*", "g37plus", "eps1", True, lambda c, d: hh_star_rhs("hh1", c, d), _cd_pos),
        PrintedLaw("hh2*", "g37plus", "eps2", True, lambda c, d: hh_star_rhs("hh2", c, d), _cd_pos),
        PrintedLaw("hh3*", "g37plus", "eps3", True, lambda c, d: hh_star_rhs("hh3", c, d), _cd_pos),
        PrintedLaw(
            "L*", "g37plus", "L", True, l_star_rhs,
            lambda c, d: qsign(c) != 0 and qsign(4 * c + 5 * d) != 0, pairing_term=True,
        ),
        PrintedLaw(
            "q11", "gamma0_11", "Q", False, q11_rhs,
            lambda c, d: qsign(c) != 0 and qsign(22 * d - 7 * c) != 0,
        ),
        PrintedLaw(
            "q11*", "gamma0_11", "Q", True, q11_star_rhs,
            lambda c, d: qsign(c) != 0 and qsign(22 * d - 7 * c) != 0, pairing_term=True,
        ),
    ]
    for q in (3, 4, 5, 6, 7, 12):
        laws.append(
            PrintedLaw(f"rec{q}", f"hecke_{q}", "w", False, (lambda q: lambda c, d: rec_rhs(q, c, d))(q), _cd_pos)
        )
    return {law.name: law for law in laws}


PRINTED_LAWS = _make_laws()


def printed_law_defect(model: SymbolModel, law: PrintedLaw, g: Element, direct: bool = False):
    """Printed left side minus printed right side at g's bottom row.

    With ``direct`` the partner value is computed as H(-iota(g tau)) from its
    own word (needs iota images); otherwise as -H(g tau).  Returns None when
    the law's condition fails at g.
    """
    from .groups import parse_word

    c, d = _c(g), _d(g)
    if not law.condition(c, d):
        return None
    tau = model.element(parse_word(law.tau))
    gt = model.mul(g, tau)
    H = model.Hstar if law.star else model.H
    if direct:
        partner = H(model.neg(model.iota(gt)))
    else:
        partner = -H(gt)
    rhs = law.rhs(c, d)
    if law.pairing_term:
        rhs = rhs - model.pairing(g, tau)
    return H(g) + partner - rhs


def fricke_defects(model: SymbolModel, g: Element, w: Element, lam) -> dict[str, SymbolValue | None]:
    """der1 / der2 for the Fricke-type element w = (0 -1/lam; lam 0)."""
    c, d = _c(g), _d(g)
    if qsign(c) == 0 or qsign(d) == 0:
        return {"der1": None, "der2": None}
    gw = model.mul(g, w)
    out = {"der1": model.H(g) - model.H(gw) - der1_rhs(model.A, lam, c, d)}
    out["der2"] = _optional(lambda: model.Hstar(g) - model.Hstar(gw) - der2_rhs(model.A, lam, c, d))
    return out


def hid2q_defect(model: SymbolModel, g: Element, p0k: Element, N: int, k: int):
    """H(d,c) - H(d, c + kNd) - A kN(d^2+1)/(c(c+kNd)) with the partner from g P0^k."""
    c, d = _c(g), _d(g)
    c2 = c + k * N * d
    if qsign(c) * qsign(c2) <= 0:
        return None
    gp = model.mul(g, p0k)
    return model.H(g) - model.H(gp) - hid2q_rhs(model.A, N, k, c, d)


def hid_star_defect(model: SymbolModel, g: Element, p0k: Element, N: int, k: int):
    c, d = _c(g), _d(g)
    c2 = c + k * N * d
    if qsign(c) == 0 or qsign(c2) == 0:
        return None
    gp = model.mul(g, p0k)
    return _optional(lambda: model.Hstar(g) - model.Hstar(gp) - hid2q_rhs(model.A, N, k, c, d))

