from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, strategies as st

from multipivot.num_core import (
    check_stirling_identities,
    falling_factorial,
    falling_factorial_coeffs,
    harmonic,
    harmonic2,
    poly_eval,
    stirling2,
)


def bell_triangle(n_max):
    """Bell numbers from the Aitken array, no Stirling numbers involved."""
    bells = [1]
    row = [1]
    for _ in range(n_max):
        nxt = [row[-1]]
        for v in row:
            nxt.append(nxt[-1] + v)
        row = nxt
        bells.append(row[0])
    return bells


@pytest.mark.parametrize("n, expected", [(0, 0), (3, Fraction(11, 6)), (4, Fraction(25, 12))])
def test_harmonic_values(n, expected):
    assert harmonic(n) == expected


@pytest.mark.parametrize("n, expected", [(0, 0), (2, Fraction(5, 4)), (4, Fraction(205, 144))])
def test_harmonic2_values(n, expected):
    assert harmonic2(n) == expected


def test_harmonic_first_difference():
    for n in range(1, 201):
        assert harmonic(n) - harmonic(n - 1) == Fraction(1, n)
        assert harmonic2(n) - harmonic2(n - 1) == Fraction(1, n * n)


def test_harmonic_rejects_negative():
    with pytest.raises(ValueError):
        harmonic(-1)


@pytest.mark.parametrize("n, j, expected", [(2, 2, 1), (3, 2, 3), (2, 5, 0), (0, 0, 1), (4, 0, 0)])
def test_stirling2_values(n, j, expected):
    assert stirling2(n, j) == expected


def test_stirling2_rows_sum_to_bell_numbers():
    bells = bell_triangle(15)
    for n in range(16):
        assert sum(stirling2(n, j) for j in range(n + 1)) == bells[n]


@given(st.integers(0, 12), st.integers(-6, 6))
def test_powers_expand_in_falling_factorials(m, x):
    # x^m = sum_j {m, j} x(x-1)...(x-j+1)
    assert sum(stirling2(m, j) * falling_factorial(x, j) for j in range(m + 1)) == x**m


@pytest.mark.parametrize(
    "k, expected", [(1, [0, 1]), (2, [0, -1, 1]), (3, [0, 2, -3, 1])]
)
def test_falling_factorial_coeffs(k, expected):
    assert falling_factorial_coeffs(k) == expected


def test_falling_factorial_at_minus_two():
    for k in range(1, 21):
        direct = 1
        for i in range(k):
            direct *= -2 - i
        assert poly_eval(falling_factorial_coeffs(k), -2) == direct
        assert abs(direct) == factorial(k + 1)


def test_identities_k3_by_hand():
    report = check_stirling_identities(3)
    a, b, c = report.checks
    assert a.lhs == -1 and a.ok
    assert c.lhs == -4 and c.ok


def test_identity_b_k2_by_hand():
    b = check_stirling_identities(2).checks[1]
    assert b.lhs == 2 == b.rhs


@pytest.mark.parametrize("k", range(2, 21))
def test_identities_hold(k):
    report = check_stirling_identities(k)
    assert report.ok, report.failures()


def test_identity_cap_enforced():
    with pytest.raises(ValueError):
        check_stirling_identities(21)
    with pytest.raises(ValueError):
        check_stirling_identities(1)
