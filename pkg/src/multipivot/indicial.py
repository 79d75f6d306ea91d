"""The indicial polynomial P_k(t) = (-1)^k t(t-1)...(t-k+1) - (k+1)! and its roots.

-2 is always an exact root. It is divided out in integer arithmetic and the
remaining k-1 roots come from the companion matrix of the quotient, then get
a few Newton steps against the full polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

import numpy as np

from multipivot.num_core import (
    IdentityCheck,
    IdentityReport,
    falling_factorial_coeffs,
    harmonic,
    harmonic2,
    poly_eval,
)

K_CAP = 15
RESIDUAL_TOL = 1e-9
SEPARATION_TOL = 1e-6
REAL_TOL = 1e-9


class RootFindingError(RuntimeError):
    """Numeric roots failed the residual or separation contract."""


@dataclass
class IndicialPolynomial:
    k: int
    coeffs: list[int]
    roots: list[complex] = field(default_factory=list)

    def __call__(self, t):
        return poly_eval(self.coeffs, t)

    def derivative(self, order: int = 1) -> list[int]:
        c = list(self.coeffs)
        for _ in range(order):
            c = [d * c[d] for d in range(1, len(c))] or [0]
        return c

    def value(self, t: complex) -> complex:
        """Float evaluation in product form, which is better conditioned than Horner."""
        prod = complex(1.0)
        for i in range(self.k):
            prod *= t - i
        return (-1) ** self.k * prod - factorial(self.k + 1)


def _check_k(k: int, cap: int) -> None:
    if not isinstance(k, (int, np.integer)) or not 1 <= k <= cap:
        raise ValueError(f"k must be an integer in [1, {cap}], got {k!r}")


def build_indicial(k: int, cap: int = K_CAP) -> IndicialPolynomial:
    _check_k(k, cap)
    sign = (-1) ** k
    coeffs = [sign * c for c in falling_factorial_coeffs(k)]
    coeffs[0] -= factorial(k + 1)
    return IndicialPolynomial(k, coeffs)


def deflate(coeffs: list[int], root: int) -> tuple[list[int], int]:
    """Synthetic division by (t - root). Returns quotient and remainder."""
    deg = len(coeffs) - 1
    quotient = [0] * deg
    carry = 0
    for d in range(deg, 0, -1):
        carry = coeffs[d] + carry * root
        quotient[d - 1] = carry
    remainder = coeffs[0] + carry * root
    return quotient, remainder


def _newton_polish(poly: IndicialPolynomial, z: complex, steps: int = 4) -> complex:
    dcoeffs = poly.derivative()
    for _ in range(steps):
        d = complex(poly_eval(dcoeffs, z))
        if d == 0:
            break
        step = poly.value(z) / d
        z -= step
        if abs(step) <= 1e-15 * max(1.0, abs(z)):
            break
    return z


def _tidy_conjugates(roots: list[complex]) -> list[complex]:
    """Snap near-real roots to the axis and force exact conjugate pairs."""
    real = [complex(r.real, 0.0) for r in roots if abs(r.imag) <= REAL_TOL * max(1.0, abs(r))]
    upper = [r for r in roots if r.imag > REAL_TOL * max(1.0, abs(r))]
    lower = [r for r in roots if r.imag < -REAL_TOL * max(1.0, abs(r))]
    if len(upper) != len(lower):
        raise RootFindingError("complex roots of a real polynomial did not pair up")
    out = list(real)
    for r in upper:
        out.append(r)
        out.append(r.conjugate())
    return out


def order_roots(roots) -> list[complex]:
    """Sort by (real, imag) and move the root -2 to the end.

    Conjugates share a real part, so they end up adjacent.
    """
    roots = [complex(r) for r in roots]
    idx = min(range(len(roots)), key=lambda i: abs(roots[i] + 2))
    minus2 = roots.pop(idx)
    roots.sort(key=lambda r: (round(r.real, 9), r.imag))
    return roots + [minus2]


def find_roots(poly: IndicialPolynomial) -> list[complex]:
    """Return the k roots of P_k, -2 last; also stored on ``poly.roots``."""
    quotient, rem = deflate(poly.coeffs, -2)
    if rem != 0:
        raise RootFindingError(f"-2 is not a root of P_{poly.k} (remainder {rem})")
    if len(quotient) > 1:
        raw = np.roots(np.array(quotient[::-1], dtype=float))
        others = [_newton_polish(poly, complex(z)) for z in raw]
        others = _tidy_conjugates(others)
    else:
        others = []
    roots = order_roots(others + [complex(-2.0, 0.0)])

    scale = factorial(poly.k + 1)
    for r in roots:
        res = abs(poly.value(r)) / scale
        if res >= RESIDUAL_TOL:
            raise RootFindingError(f"residual {res:.3e} at root {r} exceeds {RESIDUAL_TOL}")
    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            if abs(roots[i] - roots[j]) <= SEPARATION_TOL:
                raise RootFindingError(
                    f"roots {roots[i]} and {roots[j]} closer than {SEPARATION_TOL}; lower k"
                )
    poly.roots = roots
    return roots


def indicial_roots(k: int) -> list[complex]:
    return find_roots(build_indicial(k))


def max_residual(poly: IndicialPolynomial) -> float:
    scale = factorial(poly.k + 1)
    return max(abs(poly.value(r)) / scale for r in poly.roots)


def derivative_identities(k: int, cap: int = K_CAP) -> IdentityReport:
    """Check P'(-2), P(-1) and P''(-2)/2 against their harmonic-number closed forms.

    Both sides are exact rationals computed from the integer coefficients.
    """
    poly = build_indicial(k, cap)
    h, h2 = harmonic(k + 1), harmonic2(k + 1)
    fk1 = factorial(k + 1)
    d1 = poly_eval(poly.derivative(1), -2)
    d2 = poly_eval(poly.derivative(2), -2)
    return IdentityReport(
        k,
        [
            IdentityCheck("P'(-2)", Fraction(d1), -fk1 * (h - 1)),
            IdentityCheck("P(-1)", Fraction(poly(-1)), Fraction(-k * factorial(k))),
            IdentityCheck(
                "P''(-2)/2",
                Fraction(d2, 2),
                fk1 * (h * h - 2 * h - h2 + 2) / 2,
            ),
        ],
    )
