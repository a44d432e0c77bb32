"""Circuit residues mu = x mod 3**tau and lambda = x mod 2**s(tau), three ways.

engine_a
    Direct modular division N * D^-1 with N summed over the grading.
engine_b_mu / engine_b_lambda
    Weighted binomial double sums (remainder approximations), built from
    ``2**-a mod 3**b`` and ``3**-b mod 2**a`` expanded as geometric powers.
engine_c
    Coupled 3-adic / graded 2-adic digit recurrence, circuits of 3x+1 only.

``closed_form_residues`` is the parity case table the engines are checked
against.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .arith import Residue, binom, canonical_residue, ceil_div, mod_inverse
from .dynamics import CircuitParams, Sign


class UnsupportedGrading(ValueError):
    """Engine C only handles circuit gradings (1, ..., 1, e) with sign +1."""


class OutOfRegime(ValueError):
    """The closed-form tables assume D > 0 (3x+1) or D < 0 (3x-1) and tau >= 2."""


@dataclass(frozen=True)
class GradedExponents:
    entries: tuple[int, ...]

    def __post_init__(self):
        entries = tuple(self.entries)
        if not entries or any(k < 1 for k in entries):
            raise ValueError(f"grading must be non-empty with entries >= 1, got {entries}")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def circuit(cls, tau: int, e: int) -> "GradedExponents":
        return cls((1,) * (tau - 1) + (e,))

    @property
    def tau(self) -> int:
        return len(self.entries)

    def __getitem__(self, w: int) -> int:
        # Indices are read cyclically, as in the digit recurrences.
        return self.entries[w % self.tau]

    def eps(self, u: int) -> int:
        """Forward prefix sum e_0 + ... + e_{u-1} (cyclic)."""
        q, r = divmod(u, self.tau)
        return q * sum(self.entries) + sum(self.entries[:r])

    def s(self, u: int) -> int:
        """Reversed prefix sum e_{tau-1} + e_{tau-2} + ... (u terms, cyclic)."""
        q, r = divmod(u, self.tau)
        return q * sum(self.entries) + sum(self.entries[self.tau - r:])


def _signs(signs: Sequence[int], tau: int) -> tuple[int, ...]:
    out = tuple(int(a) for a in signs)
    if len(out) != tau or any(a not in (1, -1) for a in out):
        raise ValueError(f"need {tau} signs in {{+1, -1}}, got {signs!r}")
    return out


def circuit_inputs(p: CircuitParams) -> tuple[GradedExponents, tuple[int, ...]]:
    return GradedExponents.circuit(p.tau, p.e), (int(p.sign),) * p.tau


@dataclass(frozen=True)
class ResiduePair:
    mu: Residue
    lam: Residue

    def as_tuple(self) -> tuple[int, int]:
        return self.mu.value, self.lam.value

    @property
    def equal(self) -> bool:
        return self.mu.value == self.lam.value

    @classmethod
    def of_integer(cls, x: int, grading: GradedExponents) -> "ResiduePair":
        return cls(canonical_residue(x, 3**grading.tau), canonical_residue(x, 2 ** grading.s(grading.tau)))


def cycle_numerator(grading: GradedExponents, signs: Sequence[int]) -> int:
    tau = grading.tau
    a = _signs(signs, tau)
    return sum(3**w * 2 ** grading.s(tau - 1 - w) * a[w] for w in range(tau))


def engine_a(grading: GradedExponents, signs: Sequence[int]) -> ResiduePair:
    tau = grading.tau
    n = cycle_numerator(grading, signs)
    d = 2 ** grading.s(tau) - 3**tau
    m3, m2 = 3**tau, 2 ** grading.s(tau)
    return ResiduePair(
        canonical_residue(n * mod_inverse(d, m3).value, m3),
        canonical_residue(n * mod_inverse(d, m2).value, m2),
    )


def remainder_approximations(grading: GradedExponents, signs: Sequence[int]) -> tuple[int, int]:
    """The unreduced double sums ``(mu~, lambda~)``.

    mu~ is congruent to mu mod 3**tau and lambda~ to lambda mod 2**s(tau);
    no reduction happens here so exact closed forms can be compared.
    """
    tau = grading.tau
    a = _signs(signs, tau)

    mu = 0
    for w in range(tau):
        k = grading.eps(w + 1)
        inner = sum(binom(k - 1 + y, y) * 3**y for y in range(tau - w))
        mu += (-1) ** k * 3**w * a[w] * inner

    lam = 0
    for w in range(tau):
        eta = ceil_div(grading.eps(tau - w), 2)
        inner = sum(binom(w + y, y) * 4**y for y in range(eta))
        lam += (-1) ** w * 2 ** grading.s(w) * a[tau - 1 - w] * inner
    return mu, lam


def engine_b_mu(grading: GradedExponents, signs: Sequence[int]) -> Residue:
    return canonical_residue(remainder_approximations(grading, signs)[0], 3**grading.tau)


def engine_b_lambda(grading: GradedExponents, signs: Sequence[int]) -> Residue:
    return canonical_residue(remainder_approximations(grading, signs)[1], 2 ** grading.s(grading.tau))


def engine_b(grading: GradedExponents, signs: Sequence[int]) -> ResiduePair:
    mu, lam = remainder_approximations(grading, signs)
    return ResiduePair(canonical_residue(mu, 3**grading.tau), canonical_residue(lam, 2 ** grading.s(grading.tau)))


@dataclass
class DigitTable:
    """3-adic digits ``madic[v, u]`` and graded 2-adic digits ``ladic[v, u]``.

    Row ``v`` runs over the whole period (indices are cyclic); column ``u``
    is the digit level. ``ladic[v, u]`` lives modulo ``2**e_{v-1-u}``.
    """

    tau: int
    grading: GradedExponents
    madic: dict[tuple[int, int], int] = field(default_factory=dict)
    ladic: dict[tuple[int, int], int] = field(default_factory=dict)

    def ladic_width(self, v: int, u: int) -> int:
        return self.grading[v - 1 - u]

    def rows(self) -> list[dict]:
        return [
            {
                "v": v,
                "madic": [self.madic[v, u] for u in range(self.tau)],
                "ladic": [self.ladic[v, u] for u in range(self.tau)],
            }
            for v in range(self.tau)
        ]


def engine_c(p: CircuitParams) -> tuple[DigitTable, ResiduePair]:
    if p.sign is not Sign.PLUS:
        raise UnsupportedGrading("the digit recurrence is only available for 3x+1 circuits")
    g = GradedExponents.circuit(p.tau, p.e)
    tau = p.tau
    table = DigitTable(tau, g)
    x, y = table.madic, table.ladic

    # [2^k]^-1 mod 3 is 2 for odd k and 1 for even k.
    inv2 = [mod_inverse(2 ** g[v], 3).value for v in range(tau)]
    for v in range(tau):
        x[v, 0] = inv2[v]
        m = 2 ** g[v - 1]
        y[v, 0] = mod_inverse(-3, m).value
    for u in range(1, tau):
        for v in range(tau):
            x[v, u] = inv2[v] * (x[(v + 1) % tau, u - 1] - y[(v + u) % tau, u - 1]) % 3
            m = 2 ** g[v - 1 - u]
            y[v, u] = mod_inverse(-3, m).value * (x[(v - u) % tau, u - 1] - y[(v - 1) % tau, u - 1]) % m

    mu = sum(3**w * x[0, w] for w in range(tau))
    lam = y[0, 0] + sum(2 ** g.s(u) * y[0, u] for u in range(1, tau))
    pair = ResiduePair(canonical_residue(mu, 3**tau), canonical_residue(lam, 2 ** g.s(tau)))
    return table, pair


def closed_form_residues(p: CircuitParams) -> ResiduePair:
    tau, e = p.tau, p.e
    if tau < 2:
        raise OutOfRegime("the residue tables need tau >= 2")
    if not p.in_regime:
        want = "D > 0" if p.sign is Sign.PLUS else "D < 0"
        raise OutOfRegime(f"tau={tau}, e={e}: tables assume {want}")
    tau_even, e_even = tau % 2 == 0, e % 2 == 0

    if p.sign is Sign.PLUS:
        if not e_even:
            mu = 3**tau - 1
            lam = 2 ** (e + tau - 1) - (2**e + 1) // 3
        elif tau_even:
            mu = 3 ** (tau - 1) - 1
            lam = ((2 ** (tau - 1) - 1) * 2**e - 1) // 3
        else:
            mu = 2 * 3 ** (tau - 1) - 1
            lam = ((2**tau - 1) * 2**e - 1) // 3
    else:
        if not e_even:
            mu = 1
            lam = (2**e + 1) // 3
        elif tau_even:
            mu = 2 * 3 ** (tau - 1) + 1
            lam = (2**e * (2**tau + 1) + 1) // 3
        else:
            mu = 3 ** (tau - 1) + 1
            lam = (2**e * (2 ** (tau - 1) + 1) + 1) // 3
    return ResiduePair(Residue(mu, 3**tau), Residue(lam, 2 ** (e + tau - 1)))
