"""Numerical bound chain that caps the size of a periodic orbit.

Rational quantities are computed exactly with ``Fraction``. Anything that
needs logarithms or the real power ``x**13.3`` goes through an mpmath
interval context, so every decision is taken on a rigorous enclosure:
an upper bound is the right endpoint, a "holds" verdict needs the whole
interval on the correct side. Precision is an explicit argument, never
ambient state: each precision gets its own private context.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
from mpmath import libmp


# Exponent in the linear-forms-in-logarithms lower bound, kept exact.
RHIN_EXPONENT = Fraction(133, 10)

# Lower bound on the length s(tau) of a nontrivial 3x+1 cycle (Garner).
GARNER_FLOOR = 35400
GARNER_NOTE = "Garner: a nontrivial 3x+1 cycle on the positive integers has 2*tau >= s(tau) >= 35400"

PRECISION_ENV = "CIRCUIT_VERIFIER_PRECISION"
DEFAULT_DIGITS = 50
MAX_RETRIES = 4
THRESHOLD_SCAN_LIMIT = 10**4

INF = math.inf


class PrecisionExhausted(RuntimeError):
    """An interval comparison stayed inconclusive after every precision increase."""


@dataclass(frozen=True)
class PrecisionContext:
    working_digits: int = DEFAULT_DIGITS

    def __post_init__(self):
        if self.working_digits < 50:
            raise ValueError(f"working_digits must be >= 50, got {self.working_digits}")

    @classmethod
    def from_env(cls, default: int = DEFAULT_DIGITS) -> "PrecisionContext":
        raw = os.environ.get(PRECISION_ENV)
        return cls(int(raw) if raw else default)

    def doubled(self) -> "PrecisionContext":
        return PrecisionContext(2 * self.working_digits)

    def interval(self):
        return _interval_context(self.working_digits)


@lru_cache(maxsize=None)
def _interval_context(digits: int):
    # Building a context is far costlier than the arithmetic; one per precision
    # per process. The context is configured once and never mutated afterwards.
    ctx = type(mpmath.iv)()
    ctx.dps = digits
    return ctx


def _lo(x) -> Fraction:
    return Fraction(*libmp.to_rational(x._mpi_[0]))


def _hi(x) -> Fraction:
    return Fraction(*libmp.to_rational(x._mpi_[1]))


def _decide(test, ctx: PrecisionContext, retries: int = MAX_RETRIES) -> bool:
    """Run ``test(ctx)`` (True / False / None=undecided), doubling precision on None."""
    for _ in range(retries + 1):
        verdict = test(ctx)
        if verdict is not None:
            return verdict
        ctx = ctx.doubled()
    raise PrecisionExhausted(f"undecided at {ctx.working_digits // 2} digits")


def _power(iv, base: int, exponent: Fraction):
    return iv.exp(iv.mpf(exponent.numerator) / exponent.denominator * iv.log(base))


def belaga_mignotte_bound(tau: int, s: int, ctx: PrecisionContext | None = None):
    """``(3/2)**(tau-1) / (1 - 3**tau / 2**s)``, or ``inf`` when ``2**s <= 3**tau``.

    The expression is rational, so the value is exact (trivially an upper
    bound at any precision).
    """
    if tau < 1 or s < 1:
        raise ValueError("tau and s must be positive")
    if 2**s <= 3**tau:
        return INF
    return Fraction(3, 2) ** (tau - 1) / (1 - Fraction(3**tau, 2**s))


def rhin_gap_check(tau: int, s: int, ctx: PrecisionContext | None = None) -> bool:
    """Does ``|tau log 3 - s log 2| >= s**-13.3`` hold?  Decided on intervals."""
    if tau < 1 or s < 1:
        raise ValueError("tau and s must be positive")
    ctx = ctx or PrecisionContext()

    def test(c: PrecisionContext):
        iv = c.interval()
        gap = tau * iv.log(3) - s * iv.log(2)
        lo, hi = _lo(gap), _hi(gap)
        if lo <= 0 <= hi:
            return None
        gap_lo, gap_hi = (lo, hi) if lo > 0 else (-hi, -lo)
        rhs = iv.mpf(1) / _power(iv, s, RHIN_EXPONENT)
        if gap_lo >= _hi(rhs):
            return True
        if gap_hi < _lo(rhs):
            return False
        return None

    return _decide(test, ctx)


def threshold_inequality(tau: int, ctx: PrecisionContext | None = None) -> bool:
    """Does ``(3/2)**(tau-1) * 2 * (2 tau)**13.3 < 3**tau`` hold?

    Dividing through by ``(3/2)**(tau-1)`` leaves ``2 (2 tau)**13.3 < 3 * 2**(tau-1)``.
    """
    ctx = ctx or PrecisionContext()
    rhs = 3 * 2 ** (tau - 1)

    def test(c: PrecisionContext):
        lhs = 2 * _power(c.interval(), 2 * tau, RHIN_EXPONENT)
        if _hi(lhs) < rhs:
            return True
        if _lo(lhs) >= rhs:
            return False
        return None

    return _decide(test, ctx)


def tau_threshold_plus(ctx: PrecisionContext | None = None, scan_limit: int = THRESHOLD_SCAN_LIMIT) -> int:
    """Smallest tau0 with the threshold inequality holding for every tau0 <= tau <= scan_limit."""
    return _threshold_scan((ctx or PrecisionContext()).working_digits, scan_limit)


@lru_cache(maxsize=None)
def _threshold_scan(digits: int, scan_limit: int) -> int:
    ctx = PrecisionContext(digits)
    last_fail = 0
    for tau in range(1, scan_limit + 1):
        if not threshold_inequality(tau, ctx):
            last_fail = tau
    return last_fail + 1


def eliahou_ratio_bound(x_min: int, ctx: PrecisionContext | None = None) -> Fraction:
    """Rational upper bound on s(tau)/tau: ``log2(3 + 1/x_min)`` rounded up, capped at 2."""
    if x_min < 1:
        raise ValueError("x_min must be >= 1")
    arg = Fraction(3) + Fraction(1, x_min)
    if arg == 4:
        return Fraction(2)
    iv = (ctx or PrecisionContext()).interval()
    val = iv.log(iv.mpf(arg.numerator) / arg.denominator) / iv.log(2)
    return min(_hi(val), Fraction(2))


def garner_floor() -> int:
    return GARNER_FLOOR


@dataclass(frozen=True)
class MinusBound:
    """Upper bounds on the maximal element of a 3x-1 circuit (tau, e)."""

    e: int
    tau: int
    finite: bool
    rational_bound: Fraction | float
    rhin_bound: Fraction | float
    numerator_abs: int
    numerator_cap: int

    @property
    def below_two_power(self) -> bool:
        """Whether the bound establishes x_max < 2**(e+tau-1)."""
        return self.finite and self.rational_bound < 2 ** (self.e + self.tau - 1)


def minus_system_bound(e: int, tau: int, ctx: PrecisionContext | None = None) -> MinusBound:
    """``x_max < ((2^e+1)/3) / (1 - 2^(e+tau-1)/3^tau) < ((2^e+1)/3) * 2 (e+tau-1)^13.3``.

    The first bound is an exact rational; the second is the right endpoint
    of an interval enclosure. Both are ``inf`` when ``3**tau <= 2**(e+tau-1)``.
    """
    if e < 1 or tau < 1:
        raise ValueError("e and tau must be positive")
    s = e + tau - 1
    numerator_abs = abs(2**s - (2**e + 1) * 3 ** (tau - 1))
    numerator_cap = 3 ** (tau - 1) * (2**e + 1)
    if 3**tau <= 2**s:
        return MinusBound(e, tau, False, INF, INF, numerator_abs, numerator_cap)
    head = Fraction(2**e + 1, 3)
    rational = head / (1 - Fraction(2**s, 3**tau))
    iv = (ctx or PrecisionContext()).interval()
    rhin = _hi(2 * _power(iv, s, RHIN_EXPONENT)) * head
    return MinusBound(e, tau, True, rational, rhin, numerator_abs, numerator_cap)
