import cmath
from math import factorial, sqrt

import numpy as np
import pytest

from multipivot.indicial import (
    RootFindingError,
    build_indicial,
    deflate,
    derivative_identities,
    find_roots,
)


@pytest.mark.parametrize(
    "k, coeffs",
    [(1, [-2, -1]), (2, [-6, -1, 1]), (3, [-24, -2, 3, -1])],
)
def test_coefficients_by_hand(k, coeffs):
    assert build_indicial(k).coeffs == coeffs


@pytest.mark.parametrize("k", range(1, 16))
def test_polynomial_invariants(k):
    p = build_indicial(k)
    assert len(p.coeffs) == k + 1
    assert p.coeffs[-1] == (-1) ** k
    assert p.coeffs[0] == -factorial(k + 1)
    assert p(-2) == 0


@pytest.mark.parametrize("k", [0, 16, -3])
def test_k_outside_cap(k):
    with pytest.raises(ValueError):
        build_indicial(k)


def test_deflate_exact():
    q, rem = deflate([-6, -1, 1], -2)
    assert rem == 0 and q == [-3, 1]


def _close_sets(a, b, tol=1e-9):
    a, b = list(a), list(b)
    for z in a:
        idx = min(range(len(b)), key=lambda i: abs(b[i] - z))
        assert abs(b.pop(idx) - z) < tol
    assert not b


def test_roots_k2():
    _close_sets(find_roots(build_indicial(2)), [3, -2])


def test_roots_k3():
    half = sqrt(23) / 2
    _close_sets(find_roots(build_indicial(3)), [-2, 2.5 + half * 1j, 2.5 - half * 1j])


def test_roots_k4():
    half = sqrt(39) / 2
    _close_sets(find_roots(build_indicial(4)), [-2, 5, 1.5 + half * 1j, 1.5 - half * 1j])


@pytest.mark.parametrize("k", range(1, 16))
def test_root_contract(k):
    p = build_indicial(k)
    roots = find_roots(p)
    assert len(roots) == k
    assert roots[-1] == -2
    for r in roots:
        assert abs(p.value(r)) / factorial(k + 1) < 1e-9
        assert -2 - 1e-9 <= r.real <= k + 1 + 1e-9
    # -2 is the unique leftmost root
    assert all(r.real > -2 for r in roots[:-1])


@pytest.mark.parametrize("k", range(2, 13))
def test_other_roots_stay_right_of_minus_three_halves(k):
    assert all(r.real > -1.5 for r in find_roots(build_indicial(k))[:-1])


@pytest.mark.parametrize("k", range(1, 13))
def test_roots_rebuild_coefficients(k):
    p = build_indicial(k)
    rebuilt = (-1) ** k * np.poly(find_roots(p))[::-1]
    for got, want in zip(rebuilt, p.coeffs):
        assert abs(got - want) <= 1e-8 * max(1, abs(want))


@pytest.mark.parametrize("k", range(1, 13))
def test_conjugate_pairs_adjacent(k):
    roots = find_roots(build_indicial(k))
    i = 0
    while i < len(roots):
        r = roots[i]
        if r.imag:
            mate = roots[i + 1]
            assert abs(r.imag + mate.imag) < 1e-10 and r.real == mate.real
            i += 2
        else:
            i += 1


def test_separation_failure_is_reported(monkeypatch):
    import multipivot.indicial as ind

    monkeypatch.setattr(ind, "SEPARATION_TOL", 10.0)
    with pytest.raises(RootFindingError):
        ind.find_roots(ind.build_indicial(3))


def test_derivative_identities_k3_by_hand():
    d1, p_minus1, d2 = derivative_identities(3).checks
    assert d1.lhs == -26 == d1.rhs
    assert p_minus1.lhs == -18 == p_minus1.rhs
    assert d2.lhs == 9 == d2.rhs


@pytest.mark.parametrize("k", range(1, 16))
def test_derivative_identities(k):
    assert derivative_identities(k).ok


def test_product_notation_sign():
    # P has leading coefficient (-1)^k, so prod(-2 - r_i) over the other roots
    # is (-1)^k P'(-2): the two agree only for even k
    for k in range(2, 9):
        roots = find_roots(build_indicial(k))
        prod = np.prod([-2 - r for r in roots[:-1]])
        d1 = derivative_identities(k).checks[0].lhs
        assert cmath.isclose(prod, (-1) ** k * float(d1), rel_tol=1e-9)
