"""Group descriptors, words in named generators, and bottom-row enumeration."""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Iterator

from .matrices import GMat, identity_like, mat_inv, mat_mul

__all__ = [
    "Word",
    "GroupCtx",
    "parse_word",
    "format_word",
    "eval_word",
    "word_inverse",
    "word_concat",
    "word_iota",
    "word_exponent_sums",
    "bottom_rows",
    "count_bottom_rows",
    "a_from_signature",
    "lcm",
]

Letter = tuple[str, int]
Word = tuple[Letter, ...]

_LETTER = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*(?:\^\s*([+-]?\d+))?\s*$")


def parse_word(text: str) -> Word:
    """Parse ``"Q^2*R^-1*Pinf^3"``; empty string and ``"I"`` give the empty word."""
    text = text.strip()
    if text in ("", "I", "1"):
        return ()
    letters = []
    for chunk in text.split("*"):
        m = _LETTER.match(chunk)
        if not m:
            raise ValueError(f"bad word letter {chunk!r} in {text!r}")
        exp = int(m.group(2)) if m.group(2) is not None else 1
        if exp != 0:
            letters.append((m.group(1), exp))
    return tuple(letters)


def format_word(w: Word) -> str:
    if not w:
        return "I"
    return "*".join(name if e == 1 else f"{name}^{e}" for name, e in w)


def word_inverse(w: Word) -> Word:
    return tuple((name, -e) for name, e in reversed(w))


def word_concat(*words: Word) -> Word:
    """Concatenate, merging adjacent powers of the same generator."""
    out: list[Letter] = []
    for w in words:
        for name, e in w:
            if out and out[-1][0] == name:
                e = out[-1][1] + e
                out.pop()
            if e:
                out.append((name, e))
    return tuple(out)


def word_iota(w: Word, images: dict[str, Word]) -> Word:
    """Image of a word under the automorphism iota, given images of generators."""
    parts = []
    for name, e in w:
        img = images[name]
        parts.extend([img if e > 0 else word_inverse(img)] * abs(e))
    return word_concat(*parts)


def word_exponent_sums(w: Word) -> dict[str, int]:
    sums: dict[str, int] = {}
    for name, e in w:
        sums[name] = sums.get(name, 0) + e
    return sums


def lcm(values) -> int:
    return reduce(lambda x, y: x * y // math.gcd(x, y), values, 1)


def a_from_signature(genus: int, cusps: int, orders) -> Fraction:
    """Gauss-Bonnet: A = g - 1 + n/2 + (1/2) sum(1 - 1/m_j)."""
    if cusps < 1:
        raise ValueError("need at least one cusp")
    if any(m < 2 for m in orders):
        raise ValueError("elliptic orders must be >= 2")
    return (
        genus
        - 1
        + Fraction(cusps, 2)
        + sum((1 - Fraction(1, m) for m in orders), Fraction(0)) / 2
    )


@dataclass
class GroupCtx:
    """Everything the symbol engine needs to know about one Fuchsian group.

    ``seed_S`` / ``seed_theta`` may be partial (e.g. S on the hyperbolic
    generators of Gamma_0(37)+ is not known in closed form).
    ``modsym_basis`` gives, for each generator whose modular symbol is not
    forced to vanish, its coordinates in a basis of the period lattice, and
    ``commutator_theta`` the value theta([b_i, b_j]) for basis pairs
    (``None`` when unknown).
    """

    name: str
    kind: str
    param: int
    D: int
    A: Fraction
    signature: tuple[int, int, tuple[int, ...]]
    generators: dict[str, GMat]
    relations: list[Word] = field(default_factory=list)
    seed_S: dict[str, Fraction] = field(default_factory=dict)
    seed_theta: dict[str, Fraction] | None = None
    iota_images: dict[str, Word] = field(default_factory=dict)
    modsym_basis: dict[str, tuple[int, ...]] = field(default_factory=dict)
    commutator_theta: Fraction | None = None
    elliptic_orders: dict[str, int] = field(default_factory=dict)
    parabolic: dict[str, dict] = field(default_factory=dict)
    scales: dict[str, int] = field(default_factory=dict)
    minus_identity: Word | None = None
    cusp_form: dict | None = None
    exact: bool = True
    description: str = ""

    @property
    def genus(self) -> int:
        return self.signature[0]

    @property
    def lam(self):
        """Bottom-left entry of the Fricke-type generator ``w`` when present."""
        w = self.generators.get("w")
        return None if w is None else w.c

    def identity(self) -> GMat:
        return identity_like(next(iter(self.generators.values())))

    def generator(self, name: str) -> GMat:
        try:
            return self.generators[name]
        except KeyError:
            raise KeyError(f"unknown generator {name!r} in group {self.name}") from None

    def generator_kind(self, name: str) -> str:
        if name in self.elliptic_orders:
            return "elliptic"
        return self.generator(name).kind()

    @property
    def has_minus_identity(self) -> bool:
        return self.minus_identity is not None

    def iota_closed(self) -> bool:
        return bool(self.iota_images) and set(self.iota_images) >= set(self.generators)


def eval_word(ctx: GroupCtx, w: Word) -> GMat:
    m = ctx.identity()
    for name, e in w:
        g = ctx.generator(name)
        step = g if e > 0 else mat_inv(g)
        for _ in range(abs(e)):
            m = mat_mul(m, step)
    return m


def bottom_rows(N: int, X: int, c_min: int | None = None) -> Iterator[tuple[int, int]]:
    """All (c, d) with N | c, gcd(c, d) = 1 and 0 < d <= c <= X, by c then d.

    ``c_min`` restricts to c >= c_min so callers can partition by c-range.
    """
    if N < 1:
        raise ValueError("level must be positive")
    start = N if c_min is None else max(N, -(-c_min // N) * N)
    for c in range(start, X + 1, N):
        for d in range(1, c + 1):
            if math.gcd(c, d) == 1:
                yield c, d


def count_bottom_rows(N: int, X: int) -> int:
    return sum(1 for _ in bottom_rows(N, X))
