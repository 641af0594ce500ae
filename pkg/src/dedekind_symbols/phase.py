"""Petersson's phase factor omega(M, N) and its companions.

``omega`` is the exact case table on sign triples of bottom-left entries;
``omega_log_oracle`` is the independent logarithm definition evaluated in
floating point.
"""
from __future__ import annotations

import cmath
import math
from fractions import Fraction

from .matrices import GMat, float_matrix, mat_mul
from .quadratic import qsign

__all__ = [
    "omega",
    "omega_from_signs",
    "omega_log_oracle",
    "omega_sign_formula",
    "omega_minus_parabolic",
    "rho",
    "sign_triple",
    "PhaseBreakdown",
]

_PLUS_ONE = {(1, 1, -1), (0, 1, -1), (1, 0, -1)}
_MINUS_ONE = {(-1, -1, 1), (-1, -1, 0)}


class PhaseBreakdown(ArithmeticError):
    """The float oracle landed too far from an integer to be trusted."""


def sign_triple(M: GMat, N: GMat, MN: GMat | None = None) -> tuple[int, int, int]:
    if MN is None:
        MN = mat_mul(M, N)
    return qsign(M.c), qsign(N.c), qsign(MN.c)


def omega_from_signs(triple, sgn_dM: int = 0, sgn_dN: int = 0) -> int:
    if triple in _PLUS_ONE:
        return 1
    if triple == (0, 0, 0) and sgn_dM == -1 and sgn_dN == -1:
        return 1
    if triple in _MINUS_ONE:
        return -1
    return 0


def omega(M: GMat, N: GMat, MN: GMat | None = None) -> int:
    """Phase factor from the sign table; pass ``MN`` to skip the product."""
    t = sign_triple(M, N, MN)
    if t == (0, 0, 0):
        return omega_from_signs(t, qsign(M.d), qsign(N.d))
    return omega_from_signs(t)


def rho(M: GMat) -> int:
    return 1 if qsign(M.c) == 0 and qsign(M.d) < 0 else 0


def omega_sign_formula(M: GMat, N: GMat) -> Fraction:
    cM, cN, cMN = sign_triple(M, N)
    if cM * cN * cMN == 0:
        raise ValueError("sign formula needs c_M * c_N * c_MN != 0")
    return Fraction(cM + cN - cMN - cM * cN * cMN, 4)


def omega_minus_parabolic(M: GMat, k: int = 1) -> Fraction:
    """omega(-P_inf^k, M) = omega(M, -P_inf^k); independent of k."""
    sc = qsign(M.c)
    if sc != 0:
        return Fraction(1 + sc, 2)
    return Fraction(1 - qsign(M.d), 2)


def _log_j(c: float, d: float, z: complex) -> complex:
    w = c * z + d
    # keep a signed zero from flipping the branch on the negative real axis
    return cmath.log(complex(w.real, w.imag + 0.0))


def omega_log_oracle(M, N, z: complex = 1j) -> int:
    """Evaluate the defining logarithm expression at ``z`` and round.

    ``M`` and ``N`` are GMat or ``(a, b, c, d)`` float tuples.
    """
    if isinstance(M, GMat):
        M = float_matrix(M)
    if isinstance(N, GMat):
        N = float_matrix(N)
    a1, b1, c1, d1 = M
    a2, b2, c2, d2 = N
    for a, b, c, d in (M, N):
        if abs(a * d - b * c - 1.0) > 1e-9 * max(1.0, abs(a * d), abs(b * c)):
            raise ValueError("matrix is not numerically unimodular")
    cmn = c1 * a2 + d1 * c2
    dmn = c1 * b2 + d1 * d2
    nz = (a2 * z + b2) / (c2 * z + d2)
    val = (-_log_j(cmn, dmn, z) + _log_j(c1, d1, nz) + _log_j(c2, d2, z)) / (2j * math.pi)
    k = round(val.real)
    if abs(val - k) > 0.25:
        raise PhaseBreakdown(f"oracle value {val} is not near an integer")
    return int(k)
