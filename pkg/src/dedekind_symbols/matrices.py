"""2x2 determinant-one matrices over ints, Q, Q(sqrt D) or high-precision floats."""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational

from mpmath.ctx_mp_python import _mpf

from .quadratic import FLOAT_CTX, QuadVal, is_squarefree, qsign

__all__ = [
    "GMat",
    "mat_mul",
    "mat_inv",
    "mat_neg",
    "iota",
    "identity_like",
    "gamma0_member",
    "gamma0plus_member",
    "scaled_matrix",
    "is_exact_scalar",
    "to_int",
    "float_matrix",
]


def is_exact_scalar(x) -> bool:
    return isinstance(x, (int, Rational, QuadVal))


def _det_ok(det, entries) -> bool:
    if all(is_exact_scalar(e) for e in entries):
        return det == 1
    if any(isinstance(e, _mpf) for e in entries):
        scale = max(1, max(abs(FLOAT_CTX.mpf(e)) for e in entries))
        return abs(det - 1) < FLOAT_CTX.mpf(10) ** -25 * scale**2
    return abs(float(det) - 1.0) < 1e-9 * max(1.0, max(abs(float(e)) for e in entries)) ** 2


class GMat:
    """Matrix ``(a b; c d)`` with ``ad - bc = 1``.

    Entries may be ints, Fractions, QuadVals (one shared D) or mpf/float for
    the approximate contexts.  Instances are immutable.
    """

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d, *, check: bool = True):
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)
        if check:
            if not _det_ok(a * d - b * c, (a, b, c, d)):
                raise ValueError(f"determinant of {self!r} is not 1")
            Ds = {e.D for e in (a, b, c, d) if isinstance(e, QuadVal) and e.y != 0}
            if len(Ds) > 1:
                raise ValueError(f"entries mix discriminants {sorted(Ds)}")

    def __setattr__(self, name, value):
        raise AttributeError("GMat is immutable")

    @property
    def entries(self):
        return (self.a, self.b, self.c, self.d)

    @property
    def is_exact(self) -> bool:
        return all(is_exact_scalar(e) for e in self.entries)

    def trace(self):
        return self.a + self.d

    def det(self):
        return self.a * self.d - self.b * self.c

    def __matmul__(self, other: GMat) -> GMat:
        return mat_mul(self, other)

    def __neg__(self) -> GMat:
        return mat_neg(self)

    def __pow__(self, k: int) -> GMat:
        out = identity_like(self)
        base = self if k >= 0 else mat_inv(self)
        for _ in range(abs(k)):
            out = mat_mul(out, base)
        return out

    def __eq__(self, other):
        if not isinstance(other, GMat):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __repr__(self):
        return f"GMat({self.a}, {self.b}; {self.c}, {self.d})"

    def is_scalar(self) -> bool:
        """True for +-I (exact entries only)."""
        return self.b == 0 and self.c == 0 and self.a == self.d and abs(self.a) == 1

    def kind(self) -> str:
        """'central', 'parabolic', 'elliptic' or 'hyperbolic' from the trace."""
        if qsign(self.b) == 0 and qsign(self.c) == 0:
            return "central"
        t = self.trace()
        s = qsign(t * t - 4)
        if s == 0:
            return "parabolic"
        return "elliptic" if s < 0 else "hyperbolic"


def mat_mul(m1: GMat, m2: GMat) -> GMat:
    a1, b1, c1, d1 = m1.a, m1.b, m1.c, m1.d
    a2, b2, c2, d2 = m2.a, m2.b, m2.c, m2.d
    return GMat(
        a1 * a2 + b1 * c2,
        a1 * b2 + b1 * d2,
        c1 * a2 + d1 * c2,
        c1 * b2 + d1 * d2,
        check=False,
    )


def mat_inv(m: GMat) -> GMat:
    return GMat(m.d, -m.b, -m.c, m.a, check=False)


def mat_neg(m: GMat) -> GMat:
    return GMat(-m.a, -m.b, -m.c, -m.d, check=False)


def iota(m: GMat) -> GMat:
    """The automorphism (a b; c d) -> (a -b; -c d)."""
    return GMat(m.a, -m.b, -m.c, m.d, check=False)


def identity_like(m: GMat | None = None) -> GMat:
    one, zero = 1, 0
    if m is not None:
        for e in m.entries:
            if isinstance(e, QuadVal):
                one, zero = QuadVal(1, 0, e.D), QuadVal(0, 0, e.D)
                break
            if isinstance(e, _mpf):
                one, zero = FLOAT_CTX.mpf(1), FLOAT_CTX.mpf(0)
                break
    return GMat(one, zero, zero, one, check=False)


def to_int(x) -> int:
    """Convert an exact integral scalar to int, raising ValueError otherwise."""
    if isinstance(x, bool):
        raise ValueError("boolean is not a matrix entry")
    if isinstance(x, int):
        return x
    if isinstance(x, QuadVal):
        if x.y != 0:
            raise ValueError(f"{x} is not an integer")
        x = x.x
    if isinstance(x, Rational):
        if x.denominator != 1:
            raise ValueError(f"{x} is not an integer")
        return int(x.numerator)
    raise ValueError(f"{x!r} is not an exact integer")


def scaled_matrix(a: int, b: int, c: int, d: int, e: int = 1, D: int | None = None) -> GMat:
    """The matrix (1/sqrt e)(a b; c d) with entries in Q(sqrt D).

    ``e == 1`` gives plain int entries unless ``D`` is given; otherwise ``e``
    must equal ``D`` (single quadratic field per matrix).
    """
    if e == 1:
        if D is None or D == 1:
            return GMat(a, b, c, d)
        return GMat(*(QuadVal(v, 0, D) for v in (a, b, c, d)))
    if not is_squarefree(e):
        raise ValueError(f"scale e={e} must be squarefree")
    if D is not None and D != e:
        raise ValueError(f"scale e={e} does not embed in Q(sqrt {D})")
    return GMat(*(QuadVal(0, Fraction(v, e), e) for v in (a, b, c, d)))


def gamma0_member(m: GMat, N: int) -> bool:
    """Membership in Gamma_0(N) for an integer matrix (raises on non-integers)."""
    ints = [to_int(e) for e in m.entries]
    return ints[2] % N == 0


def _divisors(n: int) -> list[int]:
    return [k for k in range(1, n + 1) if n % k == 0]


def gamma0plus_member(m: GMat, N: int) -> int | None:
    """Return the scale e | N with sqrt(e)*m integral and e|a, e|d, N|c, or None."""
    if not is_squarefree(N):
        raise ValueError(f"level {N} must be squarefree")
    for e in _divisors(N):
        try:
            if e == 1:
                ints = [to_int(x) for x in m.entries]
            else:
                ints = []
                for x in m.entries:
                    if isinstance(x, QuadVal):
                        if x.x != 0 or (x.y != 0 and x.D != e):
                            raise ValueError
                        v = x.y * e
                    elif x == 0:
                        v = Fraction(0)
                    else:
                        raise ValueError
                    if v.denominator != 1:
                        raise ValueError
                    ints.append(int(v))
        except (ValueError, TypeError):
            continue
        a, b, c, d = ints
        if a % e == 0 and d % e == 0 and c % N == 0 and a * d - b * c == e:
            return e
    return None


def float_matrix(m: GMat) -> tuple[float, float, float, float]:
    return tuple(float(e) for e in m.entries)
