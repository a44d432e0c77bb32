"""Independent reference computations for the test suite.

None of these call into circuit_verifier; they use the slowest obvious
route (enumeration, schoolbook loops) so they can catch errors in the
fast paths.
"""

from fractions import Fraction


def ext_gcd(a, b):
    """Return (g, x, y) with a*x + b*y = g."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


def long_division_remainder(a, b):
    """Remainder of a by b in [0, b) by repeated subtraction / addition."""
    r = a
    while r < 0:
        r += b
    while r >= b:
        r -= b
    return r


def trial_valuation(n):
    k = 0
    while n % 2 == 0:
        n //= 2
        k += 1
    return k


def naive_pow_mod(base, exp, m):
    acc = 1
    for _ in range(exp):
        acc = acc * base % m
    return acc % m


def brute_quotient_residue(n, d, m):
    """The unique r in [0, m) with d*r == n (mod m), found by enumeration."""
    hits = [r for r in range(m) if (d * r - n) % m == 0]
    assert len(hits) == 1, (n, d, m, hits)
    return hits[0]


def circuit_nd(tau, e, sign):
    """Numerator and denominator of the maximal element, straight from the formula."""
    n = (2**e + 1) * 3 ** (tau - 1) - 2 ** (e + tau - 1)
    d = 2 ** (e + tau - 1) - 3**tau
    return (n if sign == 1 else -n), d


def orbit_cycles(bound, sign, max_steps):
    """Every cycle reached from odd starts <= bound, as sorted tuples keyed by minimum.

    Plain visited-list iteration per start; no memo shared between starts.
    """
    found = {}
    for x0 in range(1, bound + 1, 2):
        seen = []
        x = x0
        for _ in range(max_steps):
            if x in seen:
                cyc = seen[seen.index(x):]
                found[min(cyc)] = tuple(cyc)
                break
            seen.append(x)
            y = 3 * x + sign
            while y % 2 == 0:
                y //= 2
            x = y
    return dict(sorted(found.items()))


def fib_list(n):
    f = [0, 1]
    while len(f) <= n:
        f.append(f[-1] + f[-2])
    return f


def pascal_binom(n, k):
    """Binomial coefficient from an explicit Pascal triangle, zero outside 0 <= k <= n."""
    if k < 0 or n < 0 or k > n:
        return 0
    row = [1]
    for _ in range(n):
        row = [a + b for a, b in zip([0] + row, row + [0])]
    return row[k]


def steiner_ratio_exact(a, b):
    return Fraction(2**a - 1, 2 ** (a + b) - 3**b)
