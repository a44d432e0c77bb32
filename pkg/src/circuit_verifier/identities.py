"""Combinatorial identities behind the binomial-sum residue engine.

Each ``*_check`` returns both sides of an identity as exact integers (or
residues); callers compare them. ``run_suite`` sweeps them over fixed ranges.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .arith import Residue, binom, canonical_residue, ceil_div
from .residues import GradedExponents, remainder_approximations


class FibSequence:
    """Fibonacci numbers with an append-only cache.

    Negative indices use ``F(-u) = (-1)**(u-1) * F(u)``.
    """

    def __init__(self):
        self._cache = [0, 1]

    def __getitem__(self, n: int) -> int:
        if n < 0:
            u = -n
            return (-1) ** (u - 1) * self[u]
        cache = self._cache
        while len(cache) <= n:
            cache.append(cache[-1] + cache[-2])
        return cache[n]


FIB = FibSequence()


def multinomial_identity_check(a: int, b: int, z: int) -> tuple[Residue, Residue]:
    """``(sum_{w<b} z^w)^a`` vs ``sum_{w<b} C(a-1+w, w) z^w``, both mod ``z^b``."""
    if min(a, b, z) < 1:
        raise ValueError("a, b, z must be positive")
    m = z**b
    lhs = pow(sum(z**w for w in range(b)), a, m)
    rhs = sum(binom(a - 1 + w, w) * z**w for w in range(b))
    return canonical_residue(lhs, m), canonical_residue(rhs, m)


def fibonacci_binomial_check(n: int) -> tuple[int, int]:
    return FIB[n], sum(binom(n - 1 - k, k) for k in range(n))


def bisection_recurrence_check(w: int) -> bool:
    return FIB[2 * w] == 3 * FIB[2 * (w - 1)] - FIB[2 * (w - 2)]


def vandermonde_chu_check(a: int, w: int) -> tuple[int, int]:
    """Coefficient of z^w in the multinomial induction step, two ways (w >= 1)."""
    lhs = sum(binom(a, w - y) * binom(w - 1, y) for y in range(w))
    return lhs, binom(a - 1 + w, w) - binom(w - 1, w)


def _g(a: int, k: int) -> int:
    return 2 * binom(a + 1, k) - binom(a, k)


def p_sum(k: int) -> tuple[int, int]:
    total = sum(_g(2 * k - i, i + 1) for i in range(k))
    return total, FIB[2 * k + 2] + 2 * FIB[2 * k + 1] - 3


def tail_sum(k: int) -> tuple[int, int]:
    """The alternating tail double sum of index 2k+1 and its Fibonacci closed form."""
    if k < 1:
        raise ValueError("k must be >= 1")
    total = 0
    for w in range(1, 2 * k - 1):
        inner = sum(binom(w + y, y) * 4**y for y in range(1, ceil_div(2 * k + 1 - w, 2)))
        total += (-1) ** w * 2 ** (w - 1) * inner
    return total, 4**k * (FIB[2 * k - 1] - 1)


def orbit_142_values(tau: int) -> tuple[int, int]:
    """Raw (mu~, lambda~) for the grading (2, ..., 2) with all signs +1.

    Expected: ``3**tau * F(2(tau-1)) + 1`` and ``1``.
    """
    if tau < 1:
        raise ValueError("tau must be >= 1")
    return remainder_approximations(GradedExponents((2,) * tau), (1,) * tau)


def s_coefficients(grading: GradedExponents, signs) -> list[int]:
    """Coefficients S_w of 3**w after regrouping mu~ by powers of 3."""
    out = []
    for w in range(grading.tau):
        total = 0
        for y in range(w + 1):
            k = grading.eps(y + 1)
            total += (-1) ** k * binom(k - 1 + w - y, w - y) * signs[y]
        out.append(total)
    return out


def s_collapse_check(tau: int, e: int) -> tuple[list[int], list[int]]:
    """For a 3x+1 circuit: S_0 = -1, S_w = 0 in the middle, S_{tau-1} = (-1)^(tau-1)(1 + (-1)^e)."""
    if tau < 2:
        raise ValueError("tau must be >= 2")
    got = s_coefficients(GradedExponents.circuit(tau, e), (1,) * tau)
    want = [-1] + [0] * (tau - 2) + [(-1) ** (tau - 1) * (1 + (-1) ** e)]
    return got, want


def circuit_approximation_forms(tau: int, e: int) -> tuple[tuple[int, int], tuple[int, int]]:
    """Exact unreduced mu~, lambda~ of a 3x+1 circuit with tau odd, e even.

    lambda~ carries the extra term ``2**(e+tau-1) * (F(tau-2) - 1)`` that
    vanishes modulo ``2**(e+tau-1)``.
    """
    if tau % 2 == 0 or e % 2 == 1 or tau < 3:
        raise ValueError("need tau odd >= 3 and e even")
    got = remainder_approximations(GradedExponents.circuit(tau, e), (1,) * tau)
    mu = -1 + 3 ** (tau - 1) * 2
    lam = (
        2**e * (2 ** (tau - 1) - 1) // 3
        + (2 ** (e + tau - 1) - 1) // 3
        + 2 ** (e + tau - 1) * (FIB[tau - 2] - 1)
    )
    return got, (mu, lam)


@dataclass
class SuiteResult:
    name: str
    range: str
    cases: int = 0
    failures: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.cases > 0 and not self.failures

    def record(self, ok: bool, **params):
        self.cases += 1
        if not ok:
            self.failures.append(params)


def _multinomial() -> SuiteResult:
    r = SuiteResult("multinomial", "1<=a,b<=12, z in {2,3,4,5}")
    for a in range(1, 13):
        for b in range(1, 13):
            for z in (2, 3, 4, 5):
                lhs, rhs = multinomial_identity_check(a, b, z)
                r.record(lhs == rhs, a=a, b=b, z=z, lhs=lhs.value, rhs=rhs.value)
    return r


def _fibonacci() -> SuiteResult:
    r = SuiteResult("fibonacci", "0<=n<=64")
    for n in range(65):
        f, s = fibonacci_binomial_check(n)
        r.record(f == s, n=n, fib=f, sum=s)
    return r


def _bisection() -> SuiteResult:
    r = SuiteResult("bisection", "0<=w<=64 (negative indices at w<2)")
    for w in range(65):
        r.record(bisection_recurrence_check(w), w=w)
    return r


def _vandermonde() -> SuiteResult:
    r = SuiteResult("vandermonde", "1<=a<=10, 1<=w<=10")
    for a in range(1, 11):
        for w in range(1, 11):
            lhs, rhs = vandermonde_chu_check(a, w)
            r.record(lhs == rhs, a=a, w=w, lhs=lhs, rhs=rhs)
    return r


def _p_sum() -> SuiteResult:
    r = SuiteResult("p-sum", "0<=k<=40")
    for k in range(41):
        lhs, rhs = p_sum(k)
        r.record(lhs == rhs, k=k, sum=lhs, closed=rhs)
    return r


def _tail_sum() -> SuiteResult:
    r = SuiteResult("tail-sum", "1<=k<=30")
    for k in range(1, 31):
        lhs, rhs = tail_sum(k)
        r.record(lhs == rhs, k=k, sum=lhs, closed=rhs)
    return r


def _orbit_142() -> SuiteResult:
    r = SuiteResult("orbit-142", "1<=tau<=20")
    for tau in range(1, 21):
        mu, lam = orbit_142_values(tau)
        want = 3**tau * FIB[2 * (tau - 1)] + 1
        r.record(mu == want and lam == 1, tau=tau, mu=mu, lam=lam, expected_mu=want)
    return r


def _s_collapse() -> SuiteResult:
    r = SuiteResult("s-collapse", "2<=tau<=20, 1<=e<=20")
    for tau in range(2, 21):
        for e in range(1, 21):
            got, want = s_collapse_check(tau, e)
            r.record(got == want, tau=tau, e=e)
    return r


def _circuit_forms() -> SuiteResult:
    r = SuiteResult("circuit-forms", "3<=tau<=31 odd, 2<=e<=30 even")
    for tau in range(3, 32, 2):
        for e in range(2, 31, 2):
            got, want = circuit_approximation_forms(tau, e)
            r.record(got == want, tau=tau, e=e)
    return r


SUITES = {
    "multinomial": _multinomial,
    "fibonacci": _fibonacci,
    "bisection": _bisection,
    "vandermonde": _vandermonde,
    "p-sum": _p_sum,
    "tail-sum": _tail_sum,
    "orbit-142": _orbit_142,
    "s-collapse": _s_collapse,
    "circuit-forms": _circuit_forms,
}


def run_suite(name: str = "all") -> list[SuiteResult]:
    if name == "all":
        return [fn() for fn in SUITES.values()]
    try:
        return [SUITES[name]()]
    except KeyError:
        raise ValueError(f"unknown suite {name!r}; choose from all, {', '.join(SUITES)}") from None
