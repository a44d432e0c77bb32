"""Exact integer and modular arithmetic shared by every other module.

Everything here works on Python ints, so moduli like 3**1000 are fine.
Rationals are :class:`fractions.Fraction`, which is normalized on
construction (lowest terms, positive denominator).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd

# N/D values and Steiner ratios; integrality is ``denominator == 1``.
BigRational = Fraction


class NotCoprime(ValueError):
    """Raised when an inverse is requested modulo a non-coprime modulus."""


class ZeroInput(ValueError):
    """Raised when the 2-adic valuation of zero is requested."""


@dataclass(frozen=True, order=True)
class Residue:
    value: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError(f"modulus must be >= 1, got {self.modulus}")
        if not 0 <= self.value < self.modulus:
            raise ValueError(f"{self.value} is not a canonical residue mod {self.modulus}")

    def __int__(self):
        return self.value


def canonical_residue(a: int, b: int) -> Residue:
    """The representative of ``a mod b`` in ``{0, ..., b-1}``."""
    if b < 1:
        raise ValueError(f"modulus must be >= 1, got {b}")
    # Python's % already returns a non-negative result for b > 0.
    return Residue(a % b, b)


def mod_inverse(a: int, b: int) -> Residue:
    if b < 1:
        raise ValueError(f"modulus must be >= 1, got {b}")
    if gcd(a, b) != 1:
        raise NotCoprime(f"{a} has no inverse modulo {b}")
    return Residue(pow(a, -1, b), b)


def two_adic_valuation(n: int) -> int:
    if n == 0:
        raise ZeroInput("the 2-adic valuation of 0 is infinite")
    return (n & -n).bit_length() - 1


def mod_pow(base: int, exp: int, modulus: int) -> Residue:
    if exp < 0:
        raise ValueError("exponent must be non-negative")
    return Residue(pow(base, exp, modulus), modulus)


def binom(n: int, k: int) -> int:
    """Binomial coefficient that vanishes outside ``0 <= k <= n``."""
    if k < 0 or n < 0 or k > n:
        return 0
    return comb(n, k)


def ceil_div(a: int, b: int) -> int:
    return -(-a // b)
