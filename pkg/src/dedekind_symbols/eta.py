"""Eta-product q-expansions and numerical modular symbols of weight-2 forms."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .groups import GroupCtx, Word
from .matrices import GMat, to_int
from .symbols import SymbolValue

__all__ = [
    "EtaProduct",
    "FourierSeries",
    "ModSymVal",
    "pentagonal_exponents",
    "euler_product_series",
    "eta_q_expansion",
    "naive_eta_expansion",
    "truncation_for",
    "modsym",
    "calibrate_Vf",
    "EtaPairing",
    "CalibrationError",
    "F11",
]

_EPS = np.finfo(float).eps
_COEFF_LIMIT = 1 << 60


class CalibrationError(ArithmeticError):
    pass


@dataclass(frozen=True)
class EtaProduct:
    """prod_j eta(m_j z)^{r_j}."""

    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        for m, _ in self.factors:
            if m < 1:
                raise ValueError("eta multipliers must be positive")

    @property
    def weight(self) -> Fraction:
        return Fraction(sum(r for _, r in self.factors), 2)

    @property
    def leading_exponent(self) -> Fraction:
        return Fraction(sum(m * r for m, r in self.factors), 24)


F11 = EtaProduct(((1, 2), (11, 2)))


@dataclass(frozen=True)
class FourierSeries:
    """q^offset * sum_k coeffs[k] q^k, truncated after q^(offset + len - 1)."""

    coeffs: np.ndarray
    offset: Fraction

    @property
    def truncation(self) -> int:
        """Largest exponent n with a known coefficient (offset integral)."""
        return int(self.offset) + len(self.coeffs) - 1

    def coefficient(self, n: int) -> int:
        k = n - self.offset
        if k.denominator != 1 or k < 0:
            return 0
        k = int(k)
        if k >= len(self.coeffs):
            raise IndexError(f"coefficient {n} beyond truncation {self.truncation}")
        return int(self.coeffs[k])

    def cusp_coefficients(self) -> np.ndarray:
        """Array a with a[n] the coefficient of q^n, n = 0..truncation."""
        if self.offset.denominator != 1 or self.offset < 1:
            raise ValueError(f"series with leading power q^{self.offset} is not a cusp form expansion")
        out = np.zeros(self.truncation + 1, dtype=np.int64)
        out[int(self.offset):] = self.coeffs
        return out


def pentagonal_exponents(limit: int):
    """(exponent, sign) pairs of prod(1 - q^n) = sum (-1)^k q^{k(3k-1)/2} up to ``limit``."""
    out = [(0, 1)]
    k = 1
    while True:
        e1 = k * (3 * k - 1) // 2
        if e1 > limit:
            break
        sign = -1 if k % 2 else 1
        out.append((e1, sign))
        e2 = k * (3 * k + 1) // 2
        if e2 <= limit:
            out.append((e2, sign))
        k += 1
    return out


def _check(arr: np.ndarray) -> np.ndarray:
    if arr.size and int(np.abs(arr).max()) >= _COEFF_LIMIT:
        raise OverflowError("coefficient growth exceeds the int64 working range")
    return arr


def _times_pentagonal(out: np.ndarray, penta) -> np.ndarray:
    length = len(out)
    nxt = np.zeros_like(out)
    for e, s in penta:
        nxt[e:] += s * out[: length - e]
    return _check(nxt)


def _over_pentagonal(out: np.ndarray, penta) -> np.ndarray:
    # res[n] = out[n] - sum_{e>0} s * res[n-e]
    res = out.copy()
    for n in range(1, len(res)):
        acc = res[n]
        for e, s in penta[1:]:
            if e > n:
                break
            acc -= s * res[n - e]
        res[n] = acc
    return _check(res)


def _apply_factor(out: np.ndarray, m: int, r: int) -> np.ndarray:
    """Multiply a truncated series by prod_n (1 - q^{mn})^r in place of a dense product."""
    length = len(out)
    penta = [(m * e, s) for e, s in pentagonal_exponents((length - 1) // m)]
    step = _times_pentagonal if r > 0 else _over_pentagonal
    for _ in range(abs(r)):
        out = step(out, penta)
    return out


def euler_product_series(m: int, r: int, length: int) -> np.ndarray:
    """Coefficients of prod_n (1 - q^{mn})^r for exponents 0..length-1."""
    out = np.zeros(length, dtype=np.int64)
    out[0] = 1
    return _apply_factor(out, m, r)


def eta_q_expansion(p: EtaProduct, T: int) -> FourierSeries:
    """Exact integer coefficients of the eta product through q^T."""
    if T < 1:
        raise ValueError("truncation must be at least 1")
    lead = p.leading_exponent
    length = 1 if lead > T else int(math.floor(T - lead)) + 1
    out = np.zeros(length, dtype=np.int64)
    out[0] = 1
    for m, r in p.factors:
        out = _apply_factor(out, m, r)
    return FourierSeries(out, lead)


def naive_eta_expansion(p: EtaProduct, T: int) -> list[int]:
    """Direct polynomial multiplication of the (1 - q^{mn}) factors; an oracle."""
    lead = p.leading_exponent
    length = int(math.floor(T - lead)) + 1
    poly = [1] + [0] * (length - 1)
    for m, r in p.factors:
        for n in range(1, length):
            if m * n >= length:
                break
            for _ in range(abs(r)):
                if r > 0:
                    poly = [poly[i] - (poly[i - m * n] if i >= m * n else 0) for i in range(length)]
                else:
                    # multiply by 1/(1 - x) = 1 + x + x^2 + ...
                    for i in range(m * n, length):
                        poly[i] += poly[i - m * n]
    return poly


@dataclass(frozen=True)
class ModSymVal:
    value: complex
    error: float

    def __add__(self, other: ModSymVal) -> ModSymVal:
        return ModSymVal(self.value + other.value, self.error + other.error)

    def __neg__(self) -> ModSymVal:
        return ModSymVal(-self.value, self.error)

    def __sub__(self, other: ModSymVal) -> ModSymVal:
        return self + (-other)

    def scale(self, k: int) -> ModSymVal:
        return ModSymVal(k * self.value, abs(k) * self.error)

    def close_to(self, other: ModSymVal, tol: float = 0.0) -> bool:
        return abs(self.value - other.value) <= self.error + other.error + tol


def _tail_bound(T: int, c: int) -> float:
    r = math.exp(-2 * math.pi / c)
    return 2 * r ** (T + 1) / (1 - r)


def truncation_for(c: int, tol: float = 1e-13) -> int:
    """Smallest T whose geometric tail bound 2 e^{-2pi(T+1)/c}/(1 - e^{-2pi/c}) is <= tol."""
    c = abs(c)
    if c == 0:
        return 0
    r = math.exp(-2 * math.pi / c)
    T = max(1, math.ceil(math.log(tol * (1 - r) / 2) / math.log(r)) - 1)
    while _tail_bound(T, c) > tol:
        T += 1
    return T


class _SeriesCache:
    """Cusp-form coefficients a_n for n <= T, grown on demand."""

    def __init__(self, product: EtaProduct):
        self.product = product
        self.coeffs = np.zeros(1, dtype=np.int64)

    def upto(self, T: int) -> np.ndarray:
        if len(self.coeffs) <= T:
            size = max(T, 2 * len(self.coeffs))
            self.coeffs = eta_q_expansion(self.product, size).cusp_coefficients()
            n = np.arange(len(self.coeffs))
            if np.any(np.abs(self.coeffs[1:]) > n[1:]):
                raise ArithmeticError("coefficient bound |a_n| <= n fails; tail estimate invalid")
        return self.coeffs[: T + 1]


_CACHES: dict[EtaProduct, _SeriesCache] = {}


def _cache_for(product: EtaProduct) -> _SeriesCache:
    if product not in _CACHES:
        _CACHES[product] = _SeriesCache(product)
    return _CACHES[product]


def modsym(
    gamma: GMat,
    product: EtaProduct = F11,
    T: int | None = None,
    tol: float = 1e-13,
    max_terms: int = 4_000_000,
) -> ModSymVal:
    """<gamma, f> = sum_n a_n/n (e(n gamma z0) - e(n z0)) with z0 = (-d + i)/c.

    Both endpoints sit at height 1/c; phases use exact residues n*a, n*d mod c.
    The error is the geometric tail bound plus a rounding estimate.
    """
    a, b, c, d = (to_int(e) for e in gamma.entries)
    if c == 0:
        return ModSymVal(0j, 0.0)
    if c < 0:
        a, b, c, d = -a, -b, -c, -d
    if T is None:
        T = truncation_for(c, tol)
    if T > max_terms:
        raise ValueError(f"|c| = {c} needs {T} terms, above the limit {max_terms}")
    coeffs = _cache_for(product).upto(T)[1:].astype(float)
    n = np.arange(1, T + 1, dtype=np.int64)
    a_mod, d_mod = a % c, (-d) % c
    mag = np.exp(-2 * np.pi * n / c)
    ph1 = np.exp(2j * np.pi * ((n * a_mod) % c) / c)
    ph0 = np.exp(2j * np.pi * ((n * d_mod) % c) / c)
    terms = coeffs / n * mag * (ph1 - ph0)
    value = complex(terms.sum())
    rounding = 64 * _EPS * float(np.abs(terms).sum()) + 4 * _EPS * abs(value)
    return ModSymVal(value, float(_tail_bound(T, c) + rounding))


def calibrate_Vf(sym1: ModSymVal, sym2: ModSymVal, commutator_theta=1) -> tuple[float, float]:
    """V_f from theta([b1, b2]) = (V_f / pi) Im(<b1> conj <b2>); returns (V_f, error)."""
    im = (sym1.value * sym2.value.conjugate()).imag
    im_err = abs(sym1.value) * sym2.error + abs(sym2.value) * sym1.error + sym1.error * sym2.error
    if abs(im) <= max(1e-12, 10 * im_err):
        raise CalibrationError("Im(<b1> conj <b2>) is too close to zero to calibrate")
    target = float(commutator_theta)
    vf = math.pi * target / im
    return vf, float(abs(vf) * im_err / (abs(im) - im_err))


class EtaPairing:
    """Numerical pairing (V_f / 2pi) Im(<g> conj <t>) from integrated modular symbols.

    Generator symbols are integrated once; word symbols follow by additivity.
    V_f is calibrated against theta of the basis commutator.
    """

    exact = False

    def __init__(self, ctx: GroupCtx, product: EtaProduct | None = None, tol: float = 1e-13):
        if product is None:
            spec = (ctx.cusp_form or {}).get("eta_product")
            if spec is None:
                raise ValueError(f"{ctx.name} has no eta-product cusp form")
            product = EtaProduct(tuple((int(m), int(r)) for m, r in spec))
        self.ctx = ctx
        self.product = product
        self.symbols = {name: modsym(g, product, tol=tol) for name, g in ctx.generators.items()}
        basis = list(ctx.modsym_basis)
        if len(basis) != 2 or ctx.commutator_theta is None:
            raise CalibrationError(f"{ctx.name} lacks a calibration pair")
        b1, b2 = sorted(basis, key=lambda n: ctx.modsym_basis[n], reverse=True)
        self.Vf, self.Vf_error = calibrate_Vf(self.symbols[b1], self.symbols[b2], ctx.commutator_theta)

    def word_symbol(self, w: Word) -> ModSymVal:
        total = ModSymVal(0j, 0.0)
        for name, e in w:
            try:
                total = total + self.symbols[name].scale(e)
            except KeyError:
                raise KeyError(f"unknown generator {name!r} in group {self.ctx.name}") from None
        return total

    def pair_symbols(self, x: ModSymVal, y: ModSymVal) -> SymbolValue:
        im = (x.value * y.value.conjugate()).imag
        im_err = abs(x.value) * y.error + abs(y.value) * x.error + x.error * y.error
        k = self.Vf / (2 * math.pi)
        err = abs(k) * im_err + abs(im) * self.Vf_error / (2 * math.pi) + 8 * _EPS * abs(k * im)
        return SymbolValue.approx(k * im, err)

    def add(self, x: ModSymVal, y: ModSymVal, k: int = 1) -> ModSymVal:
        return x + y.scale(k)

    def zero(self) -> ModSymVal:
        return ModSymVal(0j, 0.0)

    def pair(self, u: Word, v: Word) -> SymbolValue:
        return self.pair_symbols(self.word_symbol(u), self.word_symbol(v))
