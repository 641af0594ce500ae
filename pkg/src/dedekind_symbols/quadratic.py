"""Exact arithmetic in a real quadratic field Q(sqrt D).

Rationals are plain :class:`fractions.Fraction`; :class:`QuadVal` adds a
``y * sqrt(D)`` part.  Every value with ``y == 0`` compares and hashes like the
corresponding Fraction, so rational results can flow back into code that only
knows about Fractions.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

import mpmath
from mpmath.ctx_mp_python import _mpf

__all__ = [
    "QuadVal",
    "qsign",
    "as_fraction",
    "is_squarefree",
    "parse_rational",
    "format_rational",
    "FLOAT_CTX",
    "FLOAT_ZERO",
]

# Private high-precision context for non-quadratic Hecke triangle groups.
FLOAT_CTX = mpmath.MPContext()
FLOAT_CTX.dps = 50
FLOAT_ZERO = FLOAT_CTX.mpf(10) ** -30


@lru_cache(maxsize=None)
def is_squarefree(n: int) -> bool:
    if n < 1:
        return False
    p = 2
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        p += 1
    return True


def parse_rational(text) -> Fraction:
    """Parse ``"p/q"`` (or an int / Fraction) into a reduced Fraction."""
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    return Fraction(str(text).strip())


def format_rational(x) -> str:
    x = as_fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _sgn(x) -> int:
    return (x > 0) - (x < 0)


class QuadVal:
    """x + y*sqrt(D) with rational x, y and squarefree D >= 1."""

    __slots__ = ("x", "y", "D")

    def __init__(self, x=0, y=0, D: int = 1):
        if not is_squarefree(D):
            raise ValueError(f"D={D} is not a squarefree positive integer")
        x = Fraction(x)
        y = Fraction(y)
        if D == 1:
            x, y = x + y, Fraction(0)
        self.x = x
        self.y = y
        self.D = D

    @classmethod
    def sqrt(cls, D: int) -> QuadVal:
        return cls(0, 1, D)

    # -- coercion -------------------------------------------------------
    def _coerce(self, other) -> QuadVal | None:
        if isinstance(other, QuadVal):
            if other.D != self.D and other.y != 0 and self.y != 0:
                raise ValueError(f"mismatched discriminants {self.D} and {other.D}")
            return other
        if isinstance(other, (int, Rational)):
            return QuadVal(other, 0, self.D)
        return None

    def _field_D(self, other: QuadVal) -> int:
        if self.y != 0:
            return self.D
        if other.y != 0:
            return other.D
        return max(self.D, other.D)

    @property
    def is_rational(self) -> bool:
        return self.y == 0

    def conj(self) -> QuadVal:
        return QuadVal(self.x, -self.y, self.D)

    def norm(self) -> Fraction:
        return self.x * self.x - self.D * self.y * self.y

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadVal(self.x + o.x, self.y + o.y, self._field_D(o))

    __radd__ = __add__

    def __neg__(self):
        return QuadVal(-self.x, -self.y, self.D)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadVal(self.x - o.x, self.y - o.y, self._field_D(o))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        D = self._field_D(o)
        return QuadVal(
            self.x * o.x + D * self.y * o.y, self.x * o.y + self.y * o.x, D
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt D)")
        num = self * o.conj()
        return QuadVal(num.x / n, num.y / n, num.D)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return QuadVal(1, 0, self.D) / (self ** (-k))
        out = QuadVal(1, 0, self.D)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- comparison -----------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, QuadVal):
            if self.y == 0 and other.y == 0:
                return self.x == other.x
            return self.x == other.x and self.y == other.y and self.D == other.D
        if isinstance(other, (int, Rational)):
            return self.y == 0 and self.x == other
        return NotImplemented

    def __hash__(self):
        if self.y == 0:
            return hash(self.x)
        return hash((self.x, self.y, self.D))

    def _cmp(self, other) -> int:
        o = self._coerce(other)
        if o is None:
            raise TypeError(f"cannot compare QuadVal with {type(other).__name__}")
        return qsign(self - o)

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __bool__(self):
        return self.x != 0 or self.y != 0

    def __float__(self):
        return float(self.x) + float(self.y) * math.sqrt(self.D)

    def to_mpf(self, ctx=FLOAT_CTX):
        x = ctx.mpf(self.x.numerator) / self.x.denominator
        if self.y == 0:
            return x
        return x + ctx.mpf(self.y.numerator) / self.y.denominator * ctx.sqrt(self.D)

    def __repr__(self):
        return f"QuadVal({self.x}, {self.y}, D={self.D})"

    def __str__(self):
        if self.y == 0:
            return format_rational(self.x)
        y = self.y
        root = f"sqrt({self.D})" if abs(y) == 1 else f"{format_rational(abs(y))}*sqrt({self.D})"
        if self.x == 0:
            return root if y > 0 else f"-{root}"
        return f"{format_rational(self.x)} {'+' if y > 0 else '-'} {root}"


def qsign(v) -> int:
    """Sign of a scalar as a real number, decided exactly for QuadVal.

    mpf values inside ``FLOAT_ZERO`` count as zero.
    """
    if isinstance(v, QuadVal):
        sx, sy = _sgn(v.x), _sgn(v.y)
        if sy == 0:
            return sx
        if sx == 0 or sx == sy:
            return sy
        return sx if v.x * v.x > v.D * v.y * v.y else sy
    if isinstance(v, _mpf):
        if abs(v) < FLOAT_ZERO:
            return 0
        return 1 if v > 0 else -1
    return _sgn(v)


def as_fraction(v) -> Fraction:
    """Return ``v`` as a Fraction, raising if it has an irrational part."""
    if isinstance(v, QuadVal):
        if v.y != 0:
            raise ValueError(f"{v!r} is irrational")
        return v.x
    if isinstance(v, (int, Rational)):
        return Fraction(v)
    raise TypeError(f"not an exact rational: {v!r}")
