from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from circuit_verifier.dynamics import (
    CircuitParams,
    Cycle,
    Sign,
    StepBudgetExceeded,
    accel_step,
    circuit_max_element,
    descent_count,
    find_cycles,
    is_circuit,
    search_cycles,
    steiner_ratio,
)

from oracles import circuit_nd, orbit_cycles, steiner_ratio_exact


@pytest.mark.parametrize(
    "x, sign, expected",
    [(1, Sign.PLUS, (1, 2)), (5, Sign.MINUS, (7, 1)), (7, Sign.MINUS, (5, 2)), (1, Sign.MINUS, (1, 1)), (27, Sign.PLUS, (41, 1))],
)
def test_accel_step(x, sign, expected):
    assert accel_step(x, sign) == expected


@pytest.mark.parametrize("x", [0, -3, 4, 2.0])
def test_accel_step_rejects_bad_start(x):
    with pytest.raises(ValueError):
        accel_step(x, Sign.PLUS)


def test_sign_parse():
    assert Sign.parse("minus") is Sign.MINUS
    assert Sign.parse("+1") is Sign.PLUS
    with pytest.raises(ValueError):
        Sign.parse("zero")


def _as_sets(cycles):
    return {c.min_element: tuple(sorted(c.iterates)) for c in cycles}


@pytest.mark.parametrize("sign", [Sign.PLUS, Sign.MINUS])
def test_find_cycles_matches_oracle(sign):
    oracle = orbit_cycles(100, int(sign), 1000)
    got = _as_sets(find_cycles(100, sign, 1000))
    assert got == {k: tuple(sorted(v)) for k, v in oracle.items()}


def test_find_cycles_examples():
    assert [c.iterates for c in find_cycles(100, Sign.PLUS, 1000)] == [(1,)]
    minus = find_cycles(100, Sign.MINUS, 1000)
    assert [c.min_element for c in minus] == [1, 5, 17]
    assert sorted(minus[2].iterates) == [17, 25, 37, 41, 55, 61, 91]
    assert [c.iterates for c in find_cycles(1, Sign.PLUS, 10)] == [(1,)]
    assert [c.iterates for c in find_cycles(1, Sign.MINUS, 10)] == [(1,)]


def test_find_cycles_parallel_same_as_serial():
    serial = find_cycles(5000, Sign.MINUS, 1000)
    parallel = find_cycles(5000, Sign.MINUS, 1000, parallelism=3)
    assert serial == parallel


def test_step_budget_recorded_not_fatal():
    result = search_cycles(100, Sign.MINUS, max_steps=5)
    assert result.exceeded
    assert all(isinstance(ex, StepBudgetExceeded) and ex.max_steps == 5 for ex in result.exceeded)
    assert 1 in [c.min_element for c in result.cycles]


def test_cycle_closure_and_rotation():
    for sign in Sign:
        for c in find_cycles(2000, sign, 10**4):
            assert c.iterates[0] == max(c.iterates)
            x = c.iterates[0]
            for i in range(c.length):
                x, k = accel_step(x, sign)
                assert k == c.grading[i]
            assert x == c.iterates[0]


def test_cycle_rejects_non_orbit():
    with pytest.raises(ValueError):
        Cycle((5, 9), (1, 1), Sign.MINUS)


def test_descent_count():
    plus = find_cycles(10, Sign.PLUS, 100)
    minus = find_cycles(100, Sign.MINUS, 1000)
    assert descent_count(plus[0]) == 1
    assert descent_count(minus[1]) == 1
    assert descent_count(minus[2]) == 2
    # grading read from 17 onward is (1, 1, 1, 2, 1, 1, 4)
    g = minus[2].grading
    k = minus[2].iterates.index(17)
    assert g[k:] + g[:k] == (1, 1, 1, 2, 1, 1, 4)


def test_is_circuit():
    minus = find_cycles(100, Sign.MINUS, 1000)
    assert is_circuit(minus[0]) == CircuitParams(1, 1, Sign.MINUS)
    assert is_circuit(minus[0]).degenerate
    assert is_circuit(minus[1]) == CircuitParams(2, 2, Sign.MINUS)
    assert is_circuit(minus[2]) is None
    assert is_circuit(find_cycles(1, Sign.PLUS, 10)[0]) == CircuitParams(1, 2, Sign.PLUS)


@pytest.mark.parametrize(
    "params, expected",
    [
        (CircuitParams(1, 2, Sign.PLUS), Fraction(1)),
        (CircuitParams(2, 2, Sign.MINUS), Fraction(7)),
        (CircuitParams(3, 4, Sign.PLUS), Fraction(89, 37)),
    ],
)
def test_circuit_max_element(params, expected):
    n, d = circuit_nd(params.tau, params.e, int(params.sign))
    assert Fraction(n, d) == expected
    assert circuit_max_element(params) == expected


def test_degenerate_minus_circuit_is_one():
    for tau in range(1, 30):
        assert circuit_max_element(CircuitParams(tau, 1, Sign.MINUS)) == 1


def test_found_circuits_realize_max_element():
    for sign in Sign:
        for c in find_cycles(10**4, sign, 10**4):
            p = is_circuit(c)
            if p is not None:
                assert circuit_max_element(p) == c.iterates[0]


def test_tau_one_plus_never_above_one():
    for e in range(2, 65):
        x = circuit_max_element(CircuitParams(1, e, Sign.PLUS))
        assert x <= 1
        assert (x == 1) == (e == 2)
    # e = 1: negative, so no positive solution.
    assert circuit_max_element(CircuitParams(1, 1, Sign.PLUS)) < 0


@pytest.mark.parametrize("a, b, expected", [(1, 1, Fraction(1)), (2, 1, Fraction(3, 5)), (1, 2, Fraction(-1))])
def test_steiner_ratio(a, b, expected):
    assert steiner_ratio(a, b) == expected == steiner_ratio_exact(a, b)


def test_circuit_params_validation():
    with pytest.raises(ValueError):
        CircuitParams(0, 1)
    with pytest.raises(ValueError):
        CircuitParams(2, 0)


@given(st.integers(1, 60), st.integers(1, 80), st.sampled_from([1, -1]))
def test_circuit_max_element_in_lowest_terms(tau, e, sign):
    n, d = circuit_nd(tau, e, sign)
    q = circuit_max_element(CircuitParams(tau, e, sign))
    assert q == Fraction(n, d)
    assert q.denominator > 0
