import pytest

from circuit_verifier.identities import (
    FIB,
    FibSequence,
    bisection_recurrence_check,
    circuit_approximation_forms,
    fibonacci_binomial_check,
    multinomial_identity_check,
    orbit_142_values,
    p_sum,
    run_suite,
    s_collapse_check,
    tail_sum,
    vandermonde_chu_check,
)

from oracles import fib_list, pascal_binom

F = fib_list(200)


def test_fib_sequence_positive_and_negative():
    fib = FibSequence()
    assert [fib[n] for n in range(10)] == F[:10]
    assert [fib[-u] for u in range(1, 7)] == [1, -1, 2, -3, 5, -8]
    assert fib[100] == F[100]


@pytest.mark.parametrize("a, b, z, expected", [(2, 2, 3, 7), (5, 1, 7, 1), (1, 1, 2, 1)])
def test_multinomial_examples(a, b, z, expected):
    lhs, rhs = multinomial_identity_check(a, b, z)
    assert lhs.value == rhs.value == expected % z**b


def test_multinomial_three_three_two():
    lhs, rhs = multinomial_identity_check(3, 3, 2)
    assert lhs.value == 7**3 % 8
    assert rhs.value == (1 + 3 * 2 + 6 * 4) % 8
    assert lhs == rhs


@pytest.mark.parametrize("n, expected", [(0, 0), (6, 8), (10, 55)])
def test_fibonacci_binomial_examples(n, expected):
    assert fibonacci_binomial_check(n) == (expected, expected)


def test_fibonacci_binomial_against_pascal():
    for n in range(40):
        assert fibonacci_binomial_check(n)[1] == sum(pascal_binom(n - 1 - k, k) for k in range(n)) == F[n]


@pytest.mark.parametrize("w", [0, 1, 2, 5, 64])
def test_bisection_recurrence(w):
    assert bisection_recurrence_check(w)


def test_bisection_uses_negative_index_rule():
    # w = 1: F_2 = 3 F_0 - F_{-2} requires F_{-2} = -1
    assert FIB[-2] == -1
    assert FIB[2] == 3 * FIB[0] - FIB[-2]


def test_vandermonde_against_pascal():
    for a in range(1, 11):
        for w in range(1, 11):
            lhs, rhs = vandermonde_chu_check(a, w)
            assert lhs == rhs == pascal_binom(a - 1 + w, w)


@pytest.mark.parametrize("k, expected", [(0, 0), (1, 4), (3, F[8] + 2 * F[7] - 3)])
def test_p_sum_examples(k, expected):
    assert p_sum(k) == (expected, expected)


def test_p_sum_direct_summation():
    for k in range(15):
        direct = sum(2 * pascal_binom(2 * k - i + 1, i + 1) - pascal_binom(2 * k - i, i + 1) for i in range(k))
        assert p_sum(k)[0] == direct


@pytest.mark.parametrize("k, expected", [(1, 0), (2, 16), (5, 4**5 * (F[9] - 1))])
def test_tail_sum_examples(k, expected):
    assert tail_sum(k) == (expected, expected)


def test_tail_sum_rejects_zero():
    with pytest.raises(ValueError):
        tail_sum(0)


@pytest.mark.parametrize("tau, expected_mu", [(1, 1), (3, 82), (6, 729 * 55 + 1)])
def test_orbit_142(tau, expected_mu):
    assert orbit_142_values(tau) == (expected_mu, 1)
    assert expected_mu == 3**tau * F[2 * (tau - 1)] + 1


def test_s_collapse():
    for tau in range(2, 12):
        for e in range(1, 12):
            got, want = s_collapse_check(tau, e)
            assert got == want
            assert got[0] == -1


def test_circuit_approximation_forms():
    got, want = circuit_approximation_forms(7, 4)
    assert got == want
    with pytest.raises(ValueError):
        circuit_approximation_forms(4, 4)


def test_all_suites_pass():
    results = run_suite("all")
    assert {r.name for r in results} >= {"multinomial", "fibonacci", "bisection", "p-sum", "tail-sum", "orbit-142"}
    for r in results:
        assert r.passed, (r.name, r.failures[:3])


def test_unknown_suite():
    with pytest.raises(ValueError):
        run_suite("nope")
