"""Classical Dedekind sums s(d, c) and the SL(2, Z) symbol."""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from .matrices import GMat, to_int

__all__ = [
    "sawtooth",
    "dede_s",
    "dede_s_naive",
    "dede_s_definition",
    "sl2z_S",
    "classical_reciprocity_defect",
]


def sawtooth(x) -> Fraction:
    """((x)): zero on integers, x - floor(x) - 1/2 elsewhere."""
    x = Fraction(x)
    if x.denominator == 1:
        return Fraction(0)
    return x - math.floor(x) - Fraction(1, 2)


def _check_args(d: int, c: int) -> None:
    if c < 1:
        raise ValueError(f"c must be positive, got {c}")
    if math.gcd(d, c) != 1:
        raise ValueError(f"gcd({d}, {c}) != 1")


def dede_s_definition(d: int, c: int) -> Fraction:
    """Literal sum of sawtooth products; slow, for small oracles only."""
    _check_args(d, c)
    return sum(
        (sawtooth(Fraction(d * m, c)) * sawtooth(Fraction(m, c)) for m in range(c)),
        Fraction(0),
    )


def dede_s_naive(d: int, c: int) -> Fraction:
    """O(c) evaluation of the defining sum in integer arithmetic.

    For 0 < m < c and gcd(d, c) = 1 both sawtooth values are non-integral, so
    ((dm/c))((m/c)) = (2r - c)(2m - c) / (4c^2) with r = dm mod c.
    """
    _check_args(d, c)
    d %= c
    total = sum((2 * (d * m % c) - c) * (2 * m - c) for m in range(1, c))
    return Fraction(total, 4 * c * c)


@lru_cache(maxsize=1 << 16)
def dede_s(d: int, c: int) -> Fraction:
    """s(d, c) by the reciprocity-driven Euclidean recursion.

    Negative and large ``d`` are reduced mod ``c`` (periodicity, oddness).
    With remainders r_0 = c, r_1 = d, ..., r_n = 1 and quotients q_i,
    12 c s(d, c) = c*sum((-1)^(i+1) q_i) + d + x - 3c[n odd], where x/c is the
    alternating sum of 1/(r_{i-1} r_i); x is carried in integers.
    """
    _check_args(d, c)
    d %= c
    if c == 1 or d == 0:
        return Fraction(0)
    rems = [c, d]
    quots = []
    while rems[-1] != 0:
        q, r = divmod(rems[-2], rems[-1])
        quots.append(q)
        rems.append(r)
    n = len(quots)  # rems[n] == 1, rems[n+1] == 0
    # x(r_{i-1}, r_i) = (1 - r_{i-1} * x(r_i, r_{i+1})) / r_i, x(., 1) = 1
    x = 0
    for i in range(n, 0, -1):
        x = (1 - rems[i - 1] * x) // rems[i]
    alt = sum(q if i % 2 == 0 else -q for i, q in enumerate(quots))
    num = c * alt + d + x - (3 * c if n % 2 == 1 else 0)
    return Fraction(num, 12 * c)


def sl2z_S(g: GMat) -> Fraction:
    """Dedekind's evaluation of the modular Dedekind symbol on SL(2, Z)."""
    a, b, c, d = (to_int(e) for e in g.entries)
    if a * d - b * c != 1:
        raise ValueError("matrix is not in SL(2, Z)")
    if c != 0:
        sc = 1 if c > 0 else -1
        return Fraction(a + d, 12 * c) - sc * (Fraction(1, 4) + dede_s(d, abs(c)))
    sd = 1 if d > 0 else -1
    return Fraction(b, 12 * d) + Fraction(sd - 1, 4)


def classical_reciprocity_defect(c: int, d: int, s=dede_s) -> Fraction:
    """s(c,d) + s(d,c) - (c/d + d/c + 1/(cd))/12 + 1/4; zero for coprime c, d >= 1."""
    if c < 1 or d < 1:
        raise ValueError("reciprocity needs positive arguments")
    return (
        s(c, d)
        + s(d, c)
        - Fraction(c * c + d * d + 1, 12 * c * d)
        + Fraction(1, 4)
    )
