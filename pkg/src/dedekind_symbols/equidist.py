"""Empirical equidistribution statistics for generalized Dedekind sums."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import numpy as np

from .congruence import h_gamma0
from .groups import GroupCtx, bottom_rows, lcm
from .symbols import MissingSeed

__all__ = [
    "EquidistParams",
    "FracPair",
    "t_of_group",
    "iter_frac_pairs",
    "frac_pairs",
    "grid_discrepancy",
    "sk_sum",
    "sk_partial_sums",
    "h_statistic_pairs",
    "hstar_pairs_from_words",
]


@dataclass(frozen=True)
class EquidistParams:
    N: int
    t: int
    A: Fraction
    X: int
    grid: int = 10

    @property
    def tA(self) -> Fraction:
        return self.t * self.A


@dataclass(frozen=True)
class FracPair:
    """({d/c}, {tA (a+d)/c}) kept as exact fractions."""

    c: int
    d: int
    u: Fraction
    v: Fraction


def t_of_group(ctx: GroupCtx) -> int:
    """t = 4 L L' with L the lcm of theta denominators and L' the lcm of elliptic orders."""
    if ctx.seed_theta is None:
        raise MissingSeed(f"{ctx.name} has no theta seeds")
    missing = set(ctx.generators) - set(ctx.seed_theta)
    if missing:
        raise MissingSeed(f"{ctx.name}: theta unknown on {sorted(missing)}")
    dens = [v.denominator for v in ctx.seed_theta.values()]
    if ctx.modsym_basis:
        if ctx.commutator_theta is None:
            raise MissingSeed(f"{ctx.name}: theta of the basis commutator is unknown")
        dens.append(ctx.commutator_theta.denominator)
    return 4 * lcm(dens) * lcm(ctx.signature[2])


def iter_frac_pairs(N: int, X: int, tA: Fraction, c_min: int | None = None) -> Iterator[FracPair]:
    """The inverse a of d mod c is taken in [1, c], so c = 1 gives a = 1."""
    tA = Fraction(tA)
    for c, d in bottom_rows(N, X, c_min):
        a = pow(d, -1, c) if c > 1 else 1
        yield FracPair(c, d, Fraction(d % c, c), (tA * Fraction(a + d, c)) % 1)


def frac_pairs(N: int, X: int, tA: Fraction, G: int | None = None):
    """Points as float arrays (u, v); with ``G`` also their exact box indices."""
    tA = Fraction(tA)
    p, q = tA.numerator, tA.denominator
    us, vs, iu, iv = [], [], [], []
    for c, d in bottom_rows(N, X):
        a = pow(d, -1, c) if c > 1 else 1
        den = q * c
        num = (p * (a + d)) % den
        dm = d % c
        us.append(dm / c)
        vs.append(num / den)
        if G is not None:
            iu.append(dm * G // c)
            iv.append(num * G // den)
    u, v = np.array(us), np.array(vs)
    if G is None:
        return u, v
    return u, v, np.array(iu, dtype=np.int64), np.array(iv, dtype=np.int64)


def grid_discrepancy(points, G: int):
    """Max over G x G boxes of |empirical fraction - 1/G^2|, and the count matrix.

    ``points`` is either (u, v) float arrays or (iu, iv) integer box indices.
    """
    if G < 2:
        raise ValueError("grid needs G >= 2")
    u, v = points
    u, v = np.asarray(u), np.asarray(v)
    if u.size == 0:
        raise ValueError("empty point set")
    if np.issubdtype(u.dtype, np.integer):
        iu, iv = u, v
    else:
        iu = np.minimum((u * G).astype(np.int64), G - 1)
        iv = np.minimum((v * G).astype(np.int64), G - 1)
    counts = np.bincount(iu * G + iv, minlength=G * G).reshape(G, G)
    disc = float(np.abs(counts / u.size - 1.0 / (G * G)).max())
    return disc, counts


def sk_sum(M: int, N2: int, c: int) -> complex:
    """sum over 0 <= d < c, gcd(d, c) = 1 of e((M a + N2 d)/c), a = d^-1 mod c."""
    if c < 1:
        raise ValueError("modulus must be positive")
    total = 0j
    for d in range(c):
        if math.gcd(d, c) != 1:
            continue
        a = pow(d, -1, c) if c > 1 else 1
        total += cmath.exp(2j * math.pi * ((M * a + N2 * d) % c) / c)
    return total


def sk_partial_sums(M: int, N2: int, N: int, cmax: int):
    """(c, S(M, N2, c), running sum) for c = N, 2N, ..., <= cmax."""
    out = []
    running = 0j
    for c in range(N, cmax + 1, N):
        s = sk_sum(M, N2, c)
        running += s
        out.append((c, s, running))
    return out


def h_statistic_pairs(N: int, X: int, t_prime: Fraction):
    """Exploratory ({d/c}, {t' H_N(d,c)}) with the exact finite-sum H_N."""
    t_prime = Fraction(t_prime)
    us, vs = [], []
    for c, d in bottom_rows(N, X):
        us.append((d % c) / c)
        vs.append(float((t_prime * h_gamma0(d, c, N)) % 1))
    return np.array(us), np.array(vs)


def hstar_pairs_from_words(model, words, t: int):
    """({d/c}, {t H*(gamma)}) computed directly from theta on words (small samples)."""
    out = []
    for w in words:
        el = model.element(w)
        c, d = el.matrix.c, el.matrix.d
        if c == 0:
            continue
        if c < 0:
            c, d = -c, -d
        hs = model.Hstar(el)
        out.append((Fraction(d % c, c), (t * hs.value) % 1 if hs.exact else float(t * hs) % 1))
    return out
