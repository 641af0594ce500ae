"""Symbol engine: S, theta, H and H* on group elements presented as words.

S is accumulated with the cocycle law S(g t) = S(g) + S(t) + omega(g, t);
theta with theta(g t) = theta(g) + theta(t) + P(g, t), where the pairing
P(g, t) = (V_f / 2pi) Im(<g,f> conj <t,f>) comes from a pairing provider.
"""
from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import mpmath
from mpmath.ctx_mp_python import _mpf

from .groups import GroupCtx, Word, eval_word, format_word, word_concat, word_inverse, word_iota
from .matrices import GMat, float_matrix, identity_like, iota, mat_inv, mat_mul, mat_neg
from .phase import omega
from .quadratic import FLOAT_CTX, QuadVal, format_rational, qsign

__all__ = [
    "SymbolValue",
    "MissingSeed",
    "PairingUnavailable",
    "Element",
    "SymbolModel",
    "WordModel",
    "ExactPairing",
    "s_word",
    "s_word_tree",
    "s_word_split",
    "theta_word",
    "h_of",
    "hstar_of",
    "elliptic_S",
    "elliptic_S_float",
    "parabolic_S",
    "parabolic_theta",
    "lift",
]

_MPF_REL = 1e-40


class MissingSeed(LookupError):
    """A generator in the word has no seed value for the requested symbol."""


class PairingUnavailable(LookupError):
    """The pairing between two elements cannot be determined in this context."""


def _canon(v):
    if isinstance(v, QuadVal) and v.y == 0:
        return v.x
    if isinstance(v, int) and not isinstance(v, bool):
        return Fraction(v)
    return v


def _div(x, y):
    if isinstance(x, Rational) and isinstance(y, Rational):
        return Fraction(x) / Fraction(y)
    return x / y


def _to_mpf(v):
    if isinstance(v, QuadVal):
        return v.to_mpf(FLOAT_CTX)
    if isinstance(v, Rational):
        return FLOAT_CTX.mpf(v.numerator) / v.denominator
    return FLOAT_CTX.mpf(v)


@dataclass(frozen=True)
class SymbolValue:
    """An exact value (Fraction or QuadVal) or an mpf with an error bound."""

    value: object
    error: float = 0.0
    exact: bool = True

    @property
    def tag(self) -> str:
        return "Exact" if self.exact else "Approx"

    @classmethod
    def approx(cls, value, error: float) -> SymbolValue:
        v = _to_mpf(value)
        rounding = _MPF_REL * max(1.0, float(abs(v)))
        return cls(v, float(error) + rounding, False)

    def __add__(self, other):
        o = lift(other)
        if self.exact and o.exact:
            return SymbolValue(_canon(self.value + o.value))
        return SymbolValue.approx(_to_mpf(self.value) + _to_mpf(o.value), self.error + o.error)

    __radd__ = __add__

    def __neg__(self):
        return SymbolValue(_canon(-self.value), self.error, self.exact)

    def __sub__(self, other):
        return self + (-lift(other))

    def __rsub__(self, other):
        return lift(other) - self

    def __mul__(self, other):
        o = lift(other)
        if self.exact and o.exact:
            return SymbolValue(_canon(self.value * o.value))
        a, b = _to_mpf(self.value), _to_mpf(o.value)
        err = self.error * float(abs(b)) + o.error * float(abs(a)) + self.error * o.error
        return SymbolValue.approx(a * b, err)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = lift(other)
        if self.exact and o.exact:
            return SymbolValue(_canon(_div(self.value, o.value)))
        a, b = _to_mpf(self.value), _to_mpf(o.value)
        q = a / b
        err = (self.error + float(abs(q)) * o.error) / max(float(abs(b)) - o.error, 1e-300)
        return SymbolValue.approx(q, err)

    def __rtruediv__(self, other):
        return lift(other) / self

    def __float__(self):
        return float(_to_mpf(self.value)) if not self.exact else float(self.value)

    def is_zero(self, tol: float = 0.0) -> bool:
        """Exact values must vanish exactly; approximate ones to within ``tol``."""
        if self.exact:
            return self.value == 0
        return abs(self.value) <= tol

    def magnitude(self) -> float:
        return abs(float(self))

    def __str__(self):
        if self.exact:
            v = self.value
            return format_rational(v) if isinstance(v, Rational) else str(v)
        return f"{mpmath.nstr(self.value, 17)} +- {self.error:.2e}"


def lift(x) -> SymbolValue:
    if isinstance(x, SymbolValue):
        return x
    if isinstance(x, (int, Rational, QuadVal)):
        return SymbolValue(_canon(x))
    if isinstance(x, (_mpf, float)):
        return SymbolValue.approx(x, 0.0)
    raise TypeError(f"cannot lift {type(x).__name__} to a symbol value")


# -- elements ---------------------------------------------------------------


@dataclass(frozen=True)
class Element:
    """A group element; ``word`` is kept when the element came from one."""

    matrix: GMat
    word: Word | None = None

    def __matmul__(self, other: Element) -> Element:
        w = None
        if self.word is not None and other.word is not None:
            w = word_concat(self.word, other.word)
        return Element(mat_mul(self.matrix, other.matrix), w)

    def inverse(self) -> Element:
        w = None if self.word is None else word_inverse(self.word)
        return Element(mat_inv(self.matrix), w)

    def label(self) -> str:
        if self.word is not None:
            return format_word(self.word)
        return " ".join(str(e) for e in self.matrix.entries)


# -- closed forms -------------------------------------------------------------


def h_of(ctx, m: GMat, s) -> SymbolValue:
    """H from S (Definition of the generalized Dedekind sum)."""
    s = lift(s)
    a, b, c, d = m.entries
    sc = qsign(c)
    if sc != 0:
        return -s + lift(ctx.A) * lift(_div(a + d, c)) - Fraction(sc, 4)
    return -s + lift(ctx.A) * lift(_div(b, d)) + Fraction(qsign(d) - 1, 4)


def hstar_of(ctx, m: GMat, theta) -> SymbolValue:
    theta = lift(theta)
    a, b, c, d = m.entries
    if qsign(c) != 0:
        return theta + lift(ctx.A) * lift(_div(a + d, c))
    return theta + lift(ctx.A) * lift(_div(b, d))


def _is_identity(m: GMat) -> bool:
    if m.is_exact:
        return m == identity_like(m)
    return all(qsign(x - y) == 0 for x, y in zip(m.entries, (1, 0, 0, 1)))


def elliptic_S(gamma: GMat, r: int) -> Fraction:
    """-(1/r) sum_{k=1}^{r-1} omega(gamma^k, gamma) for gamma^r = I."""
    if r < 1:
        raise ValueError("order must be positive")
    if not _is_identity(gamma**r):
        raise ValueError(f"gamma^{r} is not the identity")
    total = 0
    power = gamma
    for _ in range(1, r):
        nxt = mat_mul(power, gamma)
        total += omega(power, gamma, nxt)
        power = nxt
    return Fraction(-total, r)


def elliptic_S_float(gamma: GMat) -> float:
    """-log j(gamma, z0) / 2 pi i at the fixed point z0 in the upper half plane."""
    a, b, c, d = float_matrix(gamma)
    t = a + d
    if abs(t) >= 2 or c == 0:
        raise ValueError("matrix is not elliptic")
    z0 = complex(a - d, math.copysign(math.sqrt(4 - t * t), c)) / (2 * c)
    val = -cmath.log(c * z0 + d) / (2j * math.pi)
    return val.real


def parabolic_S(ctx, gamma: GMat, cusp_is_infty_class: bool, h: int) -> Fraction:
    """S(gamma) = delta * h * A when sigma^-1 gamma sigma = (1 h; 0 1)."""
    if gamma.kind() != "parabolic" or qsign(gamma.trace() - 2) != 0:
        raise ValueError("expected a parabolic element of trace 2")
    return Fraction(h) * ctx.A if cusp_is_infty_class else Fraction(0)


def parabolic_theta(ctx, gamma: GMat, cusp_is_infty_class: bool, h: int) -> Fraction:
    return -parabolic_S(ctx, gamma, cusp_is_infty_class, h)


# -- S along words -------------------------------------------------------------


def _unit_steps(ctx: GroupCtx, w: Word):
    """Yield (matrix, S) for each unit letter g^{+-1} of the word."""
    cache: dict[tuple[str, int], tuple[GMat, Fraction]] = {}
    for name, e in w:
        key = (name, 1 if e > 0 else -1)
        if key not in cache:
            g = ctx.generator(name)
            try:
                s = ctx.seed_S[name]
            except KeyError:
                raise MissingSeed(f"no S seed for {name} in {ctx.name}") from None
            if e > 0:
                cache[key] = (g, s)
            else:
                gi = mat_inv(g)
                # 0 = S(I) = S(g) + S(g^-1) + omega(g, g^-1)
                cache[key] = (gi, -s - omega(g, gi))
        for _ in range(abs(e)):
            yield cache[key]


def s_word(ctx: GroupCtx, w: Word) -> Fraction:
    """S of a word by left-folding the cocycle law over unit letters."""
    m = ctx.identity()
    total = Fraction(0)
    for g, s in _unit_steps(ctx, w):
        nxt = mat_mul(m, g)
        total += s + omega(m, g, nxt)
        m = nxt
    return total


def s_word_tree(ctx: GroupCtx, w: Word, rng: random.Random) -> Fraction:
    """S of a word under a random bracketing of its unit letters."""
    units = list(_unit_steps(ctx, w))
    if not units:
        return Fraction(0)

    def combine(lo: int, hi: int) -> tuple[GMat, Fraction]:
        if hi - lo == 1:
            return units[lo]
        cut = rng.randrange(lo + 1, hi)
        (m1, s1), (m2, s2) = combine(lo, cut), combine(cut, hi)
        prod = mat_mul(m1, m2)
        return prod, s1 + s2 + omega(m1, m2, prod)

    return combine(0, len(units))[1]


def s_word_split(ctx: GroupCtx, w: Word, cut: int) -> Fraction:
    """S(u) + S(v) + omega(u, v) for the split w = u v after ``cut`` letters."""
    u, v = w[:cut], w[cut:]
    return s_word(ctx, u) + s_word(ctx, v) + omega(eval_word(ctx, u), eval_word(ctx, v))


# -- theta along words ---------------------------------------------------------


class ExactPairing:
    """Pairing determined by the period-lattice coordinates of the generators.

    With <g, f> = sum_i n_i(g) w_i for a lattice basis w_1, w_2, the pairing is
    (1/2)(n_1(g) n_2(t) - n_2(g) n_1(t)) * theta([b_1, b_2]).  Generators absent
    from the basis (parabolic, elliptic, central) have vanishing symbols.
    """

    exact = True

    def __init__(self, ctx: GroupCtx):
        if len(ctx.modsym_basis) and any(len(v) != 2 for v in ctx.modsym_basis.values()):
            raise ValueError("exact pairing supports a rank-two period lattice only")
        self.ctx = ctx
        self.commutator = ctx.commutator_theta

    def word_symbol(self, w: Word) -> tuple[int, int]:
        n1 = n2 = 0
        for name, e in w:
            if name not in self.ctx.generators:
                raise KeyError(f"unknown generator {name!r} in group {self.ctx.name}")
            v = self.ctx.modsym_basis.get(name)
            if v is not None:
                n1 += e * v[0]
                n2 += e * v[1]
        return n1, n2

    def pair_symbols(self, x, y) -> SymbolValue:
        det = x[0] * y[1] - x[1] * y[0]
        if det == 0:
            return SymbolValue(Fraction(0))
        if self.commutator is None:
            raise PairingUnavailable(
                f"theta of the basis commutator is unknown for {self.ctx.name}"
            )
        return SymbolValue(Fraction(det, 2) * self.commutator)

    def add(self, x, y, k: int = 1):
        return (x[0] + k * y[0], x[1] + k * y[1])

    def zero(self):
        return (0, 0)

    def pair(self, u: Word, v: Word) -> SymbolValue:
        return self.pair_symbols(self.word_symbol(u), self.word_symbol(v))


def theta_word(ctx: GroupCtx, w: Word, pairing) -> SymbolValue:
    """theta of a word: per letter g^e add e*theta(g) plus e*P(prefix, g)."""
    if ctx.seed_theta is None:
        raise MissingSeed(f"{ctx.name} carries no theta seeds (genus {ctx.genus})")
    total = SymbolValue(Fraction(0))
    prefix = pairing.zero()
    for name, e in w:
        try:
            t = ctx.seed_theta[name]
        except KeyError:
            raise MissingSeed(f"no theta seed for {name} in {ctx.name}") from None
        g_sym = pairing.word_symbol(((name, 1),))
        total = total + e * t + e * pairing.pair_symbols(prefix, g_sym)
        prefix = pairing.add(prefix, g_sym, e)
    return total


# -- models -------------------------------------------------------------------


class SymbolModel:
    """Common interface used by the law checks.

    Subclasses supply ``S``, ``theta`` and ``pairing``; H and H* follow from
    the defining formulas.  ``A`` is the group constant.
    """

    A: Fraction
    name: str = ""

    def S(self, el: Element) -> SymbolValue:
        raise NotImplementedError

    def theta(self, el: Element) -> SymbolValue:
        raise MissingSeed(f"{self.name}: theta is not available")

    def pairing(self, el1: Element, el2: Element) -> SymbolValue:
        raise PairingUnavailable(f"{self.name}: no pairing provider")

    def H(self, el: Element) -> SymbolValue:
        return h_of(self, el.matrix, self.S(el))

    def Hstar(self, el: Element) -> SymbolValue:
        return hstar_of(self, el.matrix, self.theta(el))

    def mul(self, x: Element, y: Element) -> Element:
        return x @ y

    def inv(self, x: Element) -> Element:
        return x.inverse()

    def neg(self, x: Element) -> Element:
        return Element(mat_neg(x.matrix))

    def iota(self, x: Element) -> Element:
        return Element(iota(x.matrix))

    def translation(self, k: int) -> Element:
        """P_inf^k."""
        return Element(GMat(1, k, 0, 1))

    def has_minus_identity(self) -> bool:
        return True

    def iota_closed(self) -> bool:
        return True


class WordModel(SymbolModel):
    """Symbols of a catalog group on word-presented elements."""

    def __init__(self, ctx: GroupCtx, pairing=None):
        self.ctx = ctx
        self.A = ctx.A
        self.name = ctx.name
        self.pairing_provider = pairing
        if pairing is None and ctx.seed_theta is not None and ctx.modsym_basis:
            self.pairing_provider = ExactPairing(ctx)

    def element(self, w: Word) -> Element:
        return Element(eval_word(self.ctx, w), tuple(w))

    def _word(self, el: Element) -> Word:
        if el.word is None:
            raise ValueError("element has no word presentation")
        return el.word

    def S(self, el: Element) -> SymbolValue:
        return SymbolValue(s_word(self.ctx, self._word(el)))

    def theta(self, el: Element) -> SymbolValue:
        if self.pairing_provider is None:
            raise MissingSeed(f"{self.name}: no theta without a pairing provider")
        return theta_word(self.ctx, self._word(el), self.pairing_provider)

    def pairing(self, el1: Element, el2: Element) -> SymbolValue:
        if self.pairing_provider is None:
            raise PairingUnavailable(f"{self.name}: no pairing provider")
        return self.pairing_provider.pair(self._word(el1), self._word(el2))

    def translation(self, k: int) -> Element:
        return self.element((("Pinf", k),) if k else ())

    def neg(self, x: Element) -> Element:
        if self.ctx.minus_identity is None:
            raise ValueError(f"-I is not in {self.name}")
        w = None if x.word is None else word_concat(self.ctx.minus_identity, x.word)
        return Element(mat_neg(x.matrix), w)

    def iota(self, x: Element) -> Element:
        w = self._word(x)
        missing = {name for name, _ in w} - set(self.ctx.iota_images)
        if missing:
            raise ValueError(f"no iota image for {sorted(missing)} in {self.name}")
        return Element(iota(x.matrix), word_iota(w, self.ctx.iota_images))

    def has_minus_identity(self) -> bool:
        return self.ctx.minus_identity is not None

    def iota_closed(self) -> bool:
        return self.ctx.iota_closed()
