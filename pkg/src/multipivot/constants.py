"""Integration constants s_i of the homogeneous terms z**r_i.

The boundary conditions g(1) = g'(1) = ... = g^(k-1)(1) = 0 give a k x k
system whose row m holds the falling factorials r_i^(m) of the roots. Stirling
numbers of the second kind turn it into a plain Vandermonde system, which is
then solved twice: by a direct dense solve and by the U*L factorization of the
inverse Vandermonde matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

import numpy as np

from multipivot.indicial import SEPARATION_TOL, indicial_roots
from multipivot.num_core import falling_factorial, harmonic, harmonic2, stirling2
from multipivot.oracle import TollModel

LU_AGREEMENT_TOL = 1e-9


class SingularSystemError(ValueError):
    pass


@dataclass
class BoundarySystem:
    k: int
    matrix: np.ndarray
    rhs: list[Fraction]
    roots: list[complex]
    monomial: bool = False

    def rhs_array(self) -> np.ndarray:
        return np.array([complex(float(v)) for v in self.rhs])


@dataclass
class IntegrationConstants:
    k: int
    toll: TollModel
    entries: list[tuple[complex, complex]]

    @property
    def roots(self) -> list[complex]:
        return [r for r, _ in self.entries]

    @property
    def values(self) -> list[complex]:
        return [s for _, s in self.entries]

    def at(self, root: complex, tol: float = 1e-6) -> complex:
        for r, s in self.entries:
            if abs(r - root) <= tol:
                return s
        raise KeyError(root)

    @property
    def s_minus2(self) -> complex:
        return self.at(-2)


def rhs_vector(k: int, toll: TollModel) -> list[Fraction]:
    """Right-hand side of the falling-factorial boundary system, exact.

    Entry m is (-1)^(m+1) m! (a((m+1)H_m - m)/(H_{k+1} - 1) + (a - b)/k).
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    a, b = Fraction(toll.a_bar), Fraction(toll.b_bar)
    lead = a / (harmonic(k + 1) - 1)
    shift = (a - b) / k
    return [
        (-1) ** (m + 1) * factorial(m) * (lead * ((m + 1) * harmonic(m) - m) + shift)
        for m in range(k)
    ]


def boundary_system(k: int, toll: TollModel, roots=None) -> BoundarySystem:
    if roots is None:
        roots = indicial_roots(k)
    roots = [complex(r) for r in roots]
    if len(roots) != k:
        raise ValueError(f"expected {k} roots, got {len(roots)}")
    matrix = np.array([[falling_factorial(r, m) for r in roots] for m in range(k)], dtype=complex)
    return BoundarySystem(k, matrix, rhs_vector(k, toll), roots)


def to_monomial_system(system: BoundarySystem) -> BoundarySystem:
    """Rewrite rows as plain powers using r^m = sum_j {m, j} r^(j).

    The same integer combination is applied to the rhs, so the solution does
    not change.
    """
    if system.monomial:
        return system
    k = system.k
    comb = np.array([[stirling2(m, j) for j in range(k)] for m in range(k)], dtype=float)
    matrix = comb.astype(complex) @ system.matrix
    rhs = [sum(stirling2(m, j) * system.rhs[j] for j in range(m + 1)) for m in range(k)]
    return BoundarySystem(k, matrix, rhs, list(system.roots), monomial=True)


def vandermonde(roots) -> np.ndarray:
    """V[m, i] = roots[i] ** m."""
    r = np.asarray(roots, dtype=complex)
    return np.vander(r, increasing=True).T


def _check_separation(roots) -> None:
    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            if abs(roots[i] - roots[j]) <= SEPARATION_TOL:
                raise SingularSystemError(f"nodes {roots[i]} and {roots[j]} nearly coincide")


def vandermonde_inverse_lu(roots) -> tuple[np.ndarray, np.ndarray]:
    """Triangular factors with U @ L equal to the inverse of ``vandermonde(roots)``.

    U[i, j] = 1 / prod_{l <= j, l != i} (r_i - r_l) for i <= j. Row i of L holds
    the coefficients of (x - r_0)(x - r_1)...(x - r_{i-1}), so L has a unit
    diagonal and signed elementary symmetric functions below it.
    """
    r = [complex(x) for x in roots]
    k = len(r)
    _check_separation(r)
    upper = np.zeros((k, k), dtype=complex)
    for i in range(k):
        denom = complex(1.0)
        for l in range(i):
            denom *= r[i] - r[l]
        upper[i, i] = 1.0 / denom
        for j in range(i + 1, k):
            denom *= r[i] - r[j]
            upper[i, j] = 1.0 / denom
    lower = np.zeros((k, k), dtype=complex)
    poly = np.array([1.0 + 0j])  # coefficients, constant term first
    for i in range(k):
        lower[i, : i + 1] = poly
        nxt = np.zeros(i + 2, dtype=complex)
        nxt[1:] += poly
        nxt[:-1] -= r[i] * poly
        poly = nxt
    return upper, lower


def lu_residual(roots) -> float:
    u, l = vandermonde_inverse_lu(roots)
    v = vandermonde(roots)
    return float(np.max(np.abs((u @ l) @ v - np.eye(len(roots)))))


def solve_constants(k: int, toll: TollModel, roots=None) -> IntegrationConstants:
    """Solve the boundary system for s_1..s_k.

    The direct dense solve is returned; the U*L route must agree with it to
    ``LU_AGREEMENT_TOL`` or a ``SingularSystemError`` is raised.
    """
    system = to_monomial_system(boundary_system(k, toll, roots))
    b = system.rhs_array()
    v = vandermonde(system.roots)
    try:
        direct = np.linalg.solve(v, b)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(str(exc)) from exc
    u, l = vandermonde_inverse_lu(system.roots)
    via_lu = u @ (l @ b)
    gap = float(np.max(np.abs(direct - via_lu))) if k else 0.0
    if gap > LU_AGREEMENT_TOL:
        raise SingularSystemError(f"LU and direct solutions differ by {gap:.3e}")
    return IntegrationConstants(k, toll, list(zip(system.roots, (complex(s) for s in direct))))


def solve_constants_lu(k: int, toll: TollModel, roots=None) -> np.ndarray:
    system = to_monomial_system(boundary_system(k, toll, roots))
    u, l = vandermonde_inverse_lu(system.roots)
    return u @ (l @ system.rhs_array())


def closed_form_s_minus2(k: int, toll: TollModel) -> Fraction:
    """Exact constant attached to the root -2, i.e. the (n+1) coefficient."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    a, b = Fraction(toll.a_bar), Fraction(toll.b_bar)
    h, h2 = harmonic(k + 1), harmonic2(k + 1)
    curvature = (h * h - 2 * h - h2 + 2) / (2 * (h - 1))
    return -(a / (h - 1) * curvature + (a - b) / ((k + 1) * (h - 1)))
