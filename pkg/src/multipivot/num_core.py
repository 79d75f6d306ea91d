"""Exact combinatorial primitives: harmonic numbers, Stirling numbers and
falling factorials.

Everything here works in integers or :class:`fractions.Fraction`; there is no
float fallback.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

STIRLING_CAP = 20

_stirling_rows: list[list[int]] = [[1]]
_stirling_lock = threading.Lock()


_h1: list[Fraction] = [Fraction(0)]
_h2: list[Fraction] = [Fraction(0)]
_harmonic_lock = threading.Lock()


def _extend_harmonic(n: int) -> None:
    with _harmonic_lock:
        while len(_h1) <= n:
            j = len(_h1)
            _h1.append(_h1[-1] + Fraction(1, j))
            _h2.append(_h2[-1] + Fraction(1, j * j))


def harmonic(n: int) -> Fraction:
    """Return H_n = 1 + 1/2 + ... + 1/n exactly (H_0 = 0)."""
    if n < 0:
        raise ValueError(f"harmonic number needs n >= 0, got {n}")
    if len(_h1) <= n:
        _extend_harmonic(n)
    return _h1[n]


def harmonic2(n: int) -> Fraction:
    """Second-order harmonic number, sum of 1/j**2 for j <= n."""
    if n < 0:
        raise ValueError(f"harmonic number needs n >= 0, got {n}")
    if len(_h2) <= n:
        _extend_harmonic(n)
    return _h2[n]


@dataclass(frozen=True)
class HarmonicPair:
    n: int
    h1: Fraction
    h2: Fraction

    @classmethod
    def of(cls, n: int) -> HarmonicPair:
        return cls(n, harmonic(n), harmonic2(n))


def _extend_stirling(n: int) -> None:
    # rows are only ever appended, so readers never see a half-built row
    with _stirling_lock:
        while len(_stirling_rows) <= n:
            prev = _stirling_rows[-1]
            m = len(_stirling_rows)
            row = [0] * (m + 1)
            for j in range(1, m + 1):
                above = prev[j] if j < m else 0
                row[j] = j * above + prev[j - 1]
            _stirling_rows.append(row)


def stirling2(n: int, j: int) -> int:
    """Stirling number of the second kind {n brace j}.

    Built from the triangle recurrence {n, j} = j {n-1, j} + {n-1, j-1}.
    Rows are memoized as they are requested.
    """
    if n < 0 or j < 0:
        raise ValueError(f"stirling2 needs nonnegative arguments, got ({n}, {j})")
    if j > n:
        return 0
    if len(_stirling_rows) <= n:
        _extend_stirling(n)
    return _stirling_rows[n][j]


def falling_factorial_coeffs(k: int) -> list[int]:
    """Monomial coefficients of x(x-1)...(x-k+1), constant term first.

    These are the signed Stirling numbers of the first kind s(k, j).
    """
    if k < 1:
        raise ValueError(f"falling factorial degree must be >= 1, got {k}")
    coeffs = [1]
    for i in range(k):
        # multiply by (x - i)
        nxt = [0] * (len(coeffs) + 1)
        for d, c in enumerate(coeffs):
            nxt[d + 1] += c
            nxt[d] -= i * c
        coeffs = nxt
    return coeffs


def falling_factorial(x, m: int):
    """x(x-1)...(x-m+1) for any numeric x; the empty product is 1."""
    out = 1
    for i in range(m):
        out *= x - i
    return out


def poly_eval(coeffs, x):
    """Horner evaluation, constant term first. Exact for int/Fraction input."""
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


@dataclass
class IdentityCheck:
    name: str
    lhs: Fraction
    rhs: Fraction

    @property
    def ok(self) -> bool:
        return self.lhs == self.rhs


@dataclass
class IdentityReport:
    k: int
    checks: list[IdentityCheck] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list[IdentityCheck]:
        return [c for c in self.checks if not c.ok]


def check_stirling_identities(k: int, cap: int = STIRLING_CAP) -> IdentityReport:
    """Evaluate the three alternating Stirling sums exactly for a given k.

    (a) sum_{j=1..k} (-1)^j (j-1)! {k-1, j-1}          = (-1)^k
    (b) sum_{j=1..k} (-1)^j j! {k-1, j-1}              = (-1)^k 2^(k-1)
    (c) sum_{j=2..k} (-1)^j j! {k-1, j-1} (H_j - 1)    = (-1)^k (k-1) 2^(k-2)
    """
    if not 2 <= k <= cap:
        raise ValueError(f"k must lie in [2, {cap}], got {k}")
    sign = (-1) ** k
    a = sum((-1) ** j * factorial(j - 1) * stirling2(k - 1, j - 1) for j in range(1, k + 1))
    b = sum((-1) ** j * factorial(j) * stirling2(k - 1, j - 1) for j in range(1, k + 1))
    c = sum(
        (-1) ** j * factorial(j) * stirling2(k - 1, j - 1) * (harmonic(j) - 1)
        for j in range(2, k + 1)
    )
    return IdentityReport(
        k,
        [
            IdentityCheck("alternating_factorial", Fraction(a), Fraction(sign)),
            IdentityCheck("alternating_factorial_shifted", Fraction(b), Fraction(sign * 2 ** (k - 1))),
            IdentityCheck("harmonic_weighted", Fraction(c), Fraction(sign * (k - 1) * 2 ** (k - 2))),
        ],
    )
