"""Accelerated 3x+1 / 3x-1 maps, brute-force cycle search, circuit recognition."""

from __future__ import annotations

import enum
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .arith import two_adic_valuation

DEFAULT_BOUND = 10**6
DEFAULT_MAX_STEPS = 10**5


class Sign(enum.IntEnum):
    PLUS = 1
    MINUS = -1

    @classmethod
    def parse(cls, text) -> "Sign":
        if isinstance(text, Sign):
            return text
        key = str(text).strip().lower()
        if key in ("plus", "+", "+1", "1", "3x+1"):
            return cls.PLUS
        if key in ("minus", "-", "-1", "3x-1"):
            return cls.MINUS
        raise ValueError(f"not a sign: {text!r}")

    @property
    def label(self) -> str:
        return "3x+1" if self is Sign.PLUS else "3x-1"


class StepBudgetExceeded(RuntimeError):
    """A trajectory did not close a cycle within ``max_steps`` steps."""

    def __init__(self, start: int, max_steps: int):
        super().__init__(f"start {start}: no cycle detected within {max_steps} steps")
        self.start = start
        self.max_steps = max_steps


@dataclass(frozen=True)
class CircuitParams:
    tau: int
    e: int
    sign: Sign = Sign.PLUS

    def __post_init__(self):
        if self.tau < 1 or self.e < 1:
            raise ValueError(f"need tau >= 1 and e >= 1, got tau={self.tau}, e={self.e}")
        object.__setattr__(self, "sign", Sign(self.sign))

    @property
    def degenerate(self) -> bool:
        """The fixed point 1 of 3x-1 read as a formal circuit of any length."""
        return self.sign is Sign.MINUS and self.e == 1

    @property
    def total_exponent(self) -> int:
        return self.e + self.tau - 1

    @property
    def denominator(self) -> int:
        return 2**self.total_exponent - 3**self.tau

    @property
    def numerator(self) -> int:
        n = (2**self.e + 1) * 3 ** (self.tau - 1) - 2**self.total_exponent
        return n if self.sign is Sign.PLUS else -n

    @property
    def in_regime(self) -> bool:
        """D > 0 for 3x+1, D < 0 for 3x-1; decided by exact integer comparison."""
        d = self.denominator
        return d > 0 if self.sign is Sign.PLUS else d < 0


@dataclass(frozen=True)
class Cycle:
    iterates: tuple[int, ...]
    grading: tuple[int, ...]
    sign: Sign

    def __post_init__(self):
        if len(self.iterates) != len(self.grading) or not self.iterates:
            raise ValueError("iterates and grading must be non-empty and equally long")
        k = self.iterates.index(max(self.iterates))
        object.__setattr__(self, "iterates", tuple(self.iterates[k:] + self.iterates[:k]))
        object.__setattr__(self, "grading", tuple(self.grading[k:] + self.grading[:k]))
        object.__setattr__(self, "sign", Sign(self.sign))
        n = len(self.iterates)
        for i, x in enumerate(self.iterates):
            nxt, ex = accel_step(x, self.sign)
            if nxt != self.iterates[(i + 1) % n] or ex != self.grading[i]:
                raise ValueError(f"{self.iterates} is not a {self.sign.label} cycle at index {i}")

    @classmethod
    def from_start(cls, x: int, sign: Sign) -> "Cycle":
        """Build the cycle through ``x``; ``x`` must already be periodic."""
        iterates, grading = [], []
        y = x
        while True:
            nxt, ex = accel_step(y, sign)
            iterates.append(y)
            grading.append(ex)
            y = nxt
            if y == x:
                return cls(tuple(iterates), tuple(grading), sign)
            if len(iterates) > 10**7:
                raise ValueError(f"{x} does not appear to be periodic")

    @property
    def length(self) -> int:
        return len(self.iterates)

    @property
    def min_element(self) -> int:
        return min(self.iterates)

    def as_dict(self) -> dict:
        params = is_circuit(self)
        return {
            "iterates": list(self.iterates),
            "grading": list(self.grading),
            "min_element": self.min_element,
            "length": self.length,
            "descents": descent_count(self),
            "circuit": None if params is None else {"tau": params.tau, "e": params.e, "degenerate": params.degenerate},
        }


def _check_start(x: int):
    if not isinstance(x, int) or x < 1 or x % 2 == 0:
        raise ValueError(f"expected an odd positive integer, got {x!r}")


def accel_step(x: int, sign: Sign = Sign.PLUS) -> tuple[int, int]:
    """Return ``(T(x), e(x))`` where ``T(x) = (3x + sign) / 2**e(x)`` is odd."""
    _check_start(x)
    y = 3 * x + int(sign)
    k = two_adic_valuation(y)
    return y >> k, k


@dataclass
class SearchResult:
    cycles: list[Cycle]
    exceeded: list[StepBudgetExceeded] = field(default_factory=list)

    @property
    def circuits(self) -> list[Cycle]:
        return [c for c in self.cycles if is_circuit(c) is not None]


def _search_chunk(starts: range, sign: int, max_steps: int):
    # resolved: values known to flow into a detected cycle.
    # stalled: values on a trajectory that ran out of budget.
    resolved: set[int] = set()
    stalled: set[int] = set()
    heads: set[int] = set()
    exceeded = []
    for x0 in starts:
        path: list[int] = []
        pos: dict[int, int] = {}
        x = x0
        while x not in resolved and x not in pos and x not in stalled and len(path) < max_steps:
            pos[x] = len(path)
            path.append(x)
            y = 3 * x + sign
            x = y >> ((y & -y).bit_length() - 1)
        if x in resolved:
            resolved.update(path)
        elif x in pos:
            heads.add(min(path[pos[x]:]))
            resolved.update(path)
        else:
            exceeded.append(x0)
            stalled.update(path)
    return sorted(heads), exceeded


def search_cycles(
    bound: int = DEFAULT_BOUND,
    sign: Sign = Sign.PLUS,
    max_steps: int = DEFAULT_MAX_STEPS,
    parallelism: int = 1,
) -> SearchResult:
    """Iterate every odd start ``<= bound`` and collect the cycles reached.

    Starts are independent, so they can be split across ``parallelism``
    worker processes; the result is sorted by minimal element either way.
    """
    if bound < 1:
        raise ValueError("bound must be >= 1")
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    sign = Sign(sign)
    if parallelism <= 1:
        chunks = [_search_chunk(range(1, bound + 1, 2), int(sign), max_steps)]
    else:
        # Interleaved strides keep the work per worker roughly even.
        step = 2 * parallelism
        ranges = [range(1 + 2 * i, bound + 1, step) for i in range(parallelism)]
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            chunks = list(pool.map(_search_chunk, ranges, [int(sign)] * parallelism, [max_steps] * parallelism))

    mins = sorted({m for heads, _ in chunks for m in heads if m <= bound})
    exceeded = sorted(x for _, ex in chunks for x in ex)
    return SearchResult(
        cycles=[Cycle.from_start(m, sign) for m in mins],
        exceeded=[StepBudgetExceeded(x, max_steps) for x in exceeded],
    )


def find_cycles(
    bound: int = DEFAULT_BOUND,
    sign: Sign = Sign.PLUS,
    max_steps: int = DEFAULT_MAX_STEPS,
    parallelism: int = 1,
) -> list[Cycle]:
    return search_cycles(bound, sign, max_steps, parallelism).cycles


def descent_count(c: Cycle) -> int:
    return sum(1 for k in c.grading if k >= 2)


def is_circuit(c: Cycle) -> CircuitParams | None:
    """Circuit parameters if some rotation of the grading is ``(1, ..., 1, e)``."""
    big = [k for k in c.grading if k != 1]
    if len(big) > 1:
        return None
    e = big[0] if big else 1
    return CircuitParams(tau=c.length, e=e, sign=c.sign)


def circuit_max_element(p: CircuitParams) -> Fraction:
    """The maximal element N/D of a circuit with grading ``(1, ..., 1, e)``."""
    return Fraction(p.numerator, p.denominator)


def steiner_ratio(a: int, b: int) -> Fraction:
    if a < 1 or b < 1:
        raise ValueError("a and b must be positive")
    return Fraction(2**a - 1, 2 ** (a + b) - 3**b)
