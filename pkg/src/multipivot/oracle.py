"""Exact expected cost of k-pivot Quicksort from the partitioning recurrence.

With toll T(n) = a*n + b the expected cost satisfies

    f(n) = T(n) + (k+1)/C(n,k) * sum_{i=1}^{n-k+1} C(n-i, k-1) f(i-1)

because each of the k+1 segments has the same size distribution. The table is
filled by dynamic programming in O(n_max^2).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import comb
from numbers import Rational as _RationalABC

import numpy as np

RATIONAL_CAP = 500


class Convention(str, Enum):
    """Base case of the recurrence.

    PAPER: f(0..k-1) = 0 and the recurrence already applies at n = k, so
    f(k) = T(k). This is the boundary the generating-function solution uses.
    ALGORITHMIC: f(0..k) = 0; segments of at most k keys are left to a
    cheaper sort whose cost is not modelled.
    """

    PAPER = "paper"
    ALGORITHMIC = "algorithmic"


class Arithmetic(str, Enum):
    RATIONAL = "rational"
    FLOAT = "float"


def _as_number(x):
    if isinstance(x, (Fraction, float)):
        return x
    if isinstance(x, (int, _RationalABC)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    return float(x)


@dataclass(frozen=True)
class TollModel:
    """Mean partitioning cost a_bar*n + b_bar for one stage on n keys."""

    a_bar: Fraction | float
    b_bar: Fraction | float

    def __post_init__(self):
        object.__setattr__(self, "a_bar", _as_number(self.a_bar))
        object.__setattr__(self, "b_bar", _as_number(self.b_bar))

    @classmethod
    def parse(cls, a: str, b: str) -> TollModel:
        return cls(Fraction(a), Fraction(b))

    @property
    def exact(self) -> bool:
        return isinstance(self.a_bar, Fraction) and isinstance(self.b_bar, Fraction)

    def __call__(self, n):
        return self.a_bar * n + self.b_bar

    def as_float(self) -> TollModel:
        return TollModel(float(self.a_bar), float(self.b_bar))


def binomial(n: int, j: int) -> int:
    """C(n, j), zero when j > n."""
    if n < 0 or j < 0:
        raise ValueError(f"binomial needs nonnegative arguments, got ({n}, {j})")
    return comb(n, j)


@dataclass(frozen=True)
class ExactCostTable:
    k: int
    toll: TollModel
    values: tuple
    convention: Convention
    arithmetic: Arithmetic

    def __getitem__(self, n: int):
        return self.values[n]

    def __len__(self) -> int:
        return len(self.values)

    @property
    def n_max(self) -> int:
        return len(self.values) - 1


def _rational_table(k: int, toll: TollModel, n_max: int, start: int) -> list[Fraction]:
    a, b = Fraction(toll.a_bar), Fraction(toll.b_bar)
    f = [Fraction(0)] * (n_max + 1)
    for n in range(start, n_max + 1):
        # sum_{j=0}^{n-k} C(n-1-j, k-1) f(j); the binomial is stepped down
        # from C(n-1, k-1) so no factorials are recomputed
        acc = Fraction(0)
        w = comb(n - 1, k - 1)
        for j in range(0, n - k + 1):
            if f[j]:
                acc += w * f[j]
            m = n - 1 - j
            # C(m-1, k-1) = C(m, k-1) * (m-k+1) / m
            if m > 0:
                w = w * (m - k + 1) // m
        f[n] = a * n + b + (k + 1) * acc / comb(n, k)
    return f


def _float_table(k: int, toll: TollModel, n_max: int, start: int) -> list[float]:
    a, b = float(toll.a_bar), float(toll.b_bar)
    f = np.zeros(n_max + 1)
    # binom_km1[m] = C(m, k-1) for m = 0..n_max
    binom_km1 = np.array([float(comb(m, k - 1)) for m in range(n_max + 1)])
    for n in range(start, n_max + 1):
        # weights C(n-1-j, k-1) for j = 0..n-k, i.e. binom_km1[n-1], ..., binom_km1[k-1]
        w = binom_km1[k - 1 : n][::-1]
        f[n] = a * n + b + (k + 1) * float(np.dot(w, f[: n - k + 1])) / comb(n, k)
    return f.tolist()


def exact_cost_table(
    k: int,
    toll: TollModel,
    n_max: int,
    arithmetic: Arithmetic | str = Arithmetic.RATIONAL,
    convention: Convention | str = Convention.PAPER,
    rational_cap: int = RATIONAL_CAP,
) -> ExactCostTable:
    """Tabulate f(0..n_max) for k pivots.

    Rational arithmetic is exact but limited to ``n_max <= rational_cap``; use
    the float backend beyond that.
    """
    arithmetic = Arithmetic(arithmetic)
    convention = Convention(convention)
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if n_max < k:
        raise ValueError(f"n_max ({n_max}) must be >= k ({k})")
    start = k if convention is Convention.PAPER else k + 1
    if arithmetic is Arithmetic.RATIONAL:
        if n_max > rational_cap:
            raise ValueError(
                f"rational table limited to n_max <= {rational_cap}; use float arithmetic"
            )
        if not toll.exact:
            raise ValueError("rational arithmetic needs an exact (Fraction) toll")
        values = _rational_table(k, toll, n_max, start)
    else:
        values = _float_table(k, toll, n_max, start)
    return ExactCostTable(k, toll, tuple(values), convention, arithmetic)

