"""Closed forms for Gamma_0(N): Vassileva's S, the finite sum H_N and friends."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .classical import dede_s
from .matrices import GMat, gamma0_member, mat_inv, mat_mul, mat_neg, to_int
from .symbols import Element, SymbolModel, SymbolValue

__all__ = [
    "LevelData",
    "level_data",
    "prime_divisors",
    "divisors",
    "mobius",
    "vassileva_S",
    "h_gamma0",
    "mobius_identity_defect",
    "periodicity0_defect",
    "complete_bottom_row",
    "random_bottom_row",
    "random_gamma0_element",
    "CongruenceModel",
]


@lru_cache(maxsize=None)
def prime_divisors(n: int) -> tuple[int, ...]:
    if n < 1:
        raise ValueError("expected a positive integer")
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return tuple(out)


@lru_cache(maxsize=None)
def divisors(n: int) -> tuple[int, ...]:
    return tuple(k for k in range(1, n + 1) if n % k == 0)


@lru_cache(maxsize=None)
def mobius(n: int) -> int:
    primes = prime_divisors(n)
    m = n
    for p in primes:
        m //= p
        if m % p == 0:
            return 0
    return -1 if len(primes) % 2 else 1


@dataclass(frozen=True)
class LevelData:
    N: int
    alpha: Fraction
    beta: Fraction
    A: Fraction


@lru_cache(maxsize=None)
def level_data(N: int) -> LevelData:
    if N < 1:
        raise ValueError("level must be positive")
    alpha = Fraction(1)
    beta = Fraction(1)
    for p in prime_divisors(N):
        alpha /= 1 - Fraction(1, p)
        beta *= (1 - Fraction(1, p * p)) / (1 - Fraction(1, p))
    return LevelData(N, alpha, beta, N * beta / 12)


def _mobius_sum(d: int, c_abs: int, N: int) -> Fraction:
    total = Fraction(0)
    for v in divisors(N):
        mu = mobius(v)
        if mu:
            total += Fraction(mu, v) * dede_s(d, v * c_abs // N)
    return total


def h_gamma0(d: int, c: int, N: int) -> Fraction:
    """H_N(d, c) = alpha_N sgn(c) sum_{v | N} mu(v)/v s(d, v|c|/N); 0 for c = 0."""
    if N < 1:
        raise ValueError("level must be positive")
    if c == 0:
        if d not in (1, -1):
            raise ValueError("bottom row (0, d) needs d = +-1")
        return Fraction(0)
    if c % N or math.gcd(c, d) != 1:
        raise ValueError(f"({c}, {d}) is not a bottom row of Gamma_0({N})")
    sc = 1 if c > 0 else -1
    return level_data(N).alpha * sc * _mobius_sum(d, abs(c), N)


def vassileva_S(gamma: GMat, N: int) -> Fraction:
    """S_N(gamma) in closed form."""
    a, b, c, d = (to_int(e) for e in gamma.entries)
    if a * d - b * c != 1 or not gamma0_member(gamma, N):
        raise ValueError(f"matrix is not in Gamma_0({N})")
    ld = level_data(N)
    if c != 0:
        sc = 1 if c > 0 else -1
        return (
            ld.beta * Fraction(N * (a + d), 12 * c)
            - Fraction(sc, 4)
            - ld.alpha * sc * _mobius_sum(d, abs(c), N)
        )
    sd = 1 if d > 0 else -1
    return ld.beta * Fraction(N * b, 12 * d) + Fraction(sd - 1, 4)


def mobius_identity_defect(N: int, c: int, d: int, k: int) -> Fraction:
    """Left side minus right side of the Moebius-weighted Dedekind sum identity."""
    if N < 2 or c <= 0 or c % N or d <= 0 or math.gcd(c, d) != 1 or k <= 0:
        raise ValueError("need N >= 2, N | c > 0, d > 0 coprime to c and k > 0")
    lhs = Fraction(0)
    for v in divisors(N):
        mu = mobius(v)
        if mu:
            m = v * c // N
            lhs += Fraction(mu, v) * (dede_s(d, m) - dede_s(d, m + v * k * d))
    prod = Fraction(1)
    for p in prime_divisors(N):
        prod *= 1 - Fraction(1, p * p)
    rhs = Fraction(N * N * k * (d * d + 1), 12 * c * (c + k * N * d)) * prod
    return lhs - rhs


def periodicity0_defect(N: int, d: int, c: int, k: int) -> Fraction:
    """H_N(d,c) - H_N(d, c+kNd) - A_N kN(d^2+1)/(c(c+kNd))."""
    c2 = c + k * N * d
    if N < 2 or c * c2 <= 0:
        raise ValueError("need N >= 2 and c(c + kNd) > 0")
    A = level_data(N).A
    return h_gamma0(d, c, N) - h_gamma0(d, c2, N) - A * Fraction(k * N * (d * d + 1), c * c2)


def complete_bottom_row(c: int, d: int) -> GMat:
    """A matrix (a b; c d) of determinant 1 with a in [0, |c|) (canonical choice)."""
    if c == 0:
        if d not in (1, -1):
            raise ValueError("bottom row (0, d) needs d = +-1")
        return GMat(d, 0, 0, d)
    if math.gcd(c, d) != 1:
        raise ValueError(f"gcd({c}, {d}) != 1")
    a = pow(d, -1, abs(c)) if abs(c) > 1 else 0
    b = (a * d - 1) // c
    return GMat(a, b, c, d)


def random_bottom_row(N: int, rng: random.Random, max_c: int) -> tuple[int, int]:
    """Random (c, d) with N | c, 0 < |c| <= max_c, gcd(c, d) = 1, |d| <= max_c."""
    jmax = max(1, max_c // N)
    while True:
        c = N * rng.randint(1, jmax) * rng.choice((1, -1))
        d = rng.randint(-max_c, max_c)
        if math.gcd(c, d) == 1:
            return c, d


def random_gamma0_element(N: int, rng: random.Random, max_c: int = 200, length: int = 3) -> GMat:
    """Product of ``length`` completed random bottom rows, some inverted or negated."""
    m = GMat(1, 0, 0, 1)
    for _ in range(length):
        g = complete_bottom_row(*random_bottom_row(N, rng, max_c))
        r = rng.random()
        if r < 0.25:
            g = mat_inv(g)
        elif r < 0.35:
            g = mat_neg(g)
        m = mat_mul(m, g)
    return m


class CongruenceModel(SymbolModel):
    """Gamma_0(N) symbols on matrices via the closed forms (genus-free)."""

    def __init__(self, N: int):
        self.N = N
        self.A = level_data(N).A
        self.name = f"Gamma0({N})"

    def element(self, m: GMat) -> Element:
        return Element(m)

    def S(self, el: Element) -> SymbolValue:
        return SymbolValue(vassileva_S(el.matrix, self.N))

    def H_closed(self, el: Element) -> SymbolValue:
        _, _, c, d = (to_int(e) for e in el.matrix.entries)
        return SymbolValue(h_gamma0(d, c, self.N))
