"""Closed-form expected cost: the leading (n+1)H_n - n term, the (n+1)
coefficient, and the full coefficient series.

The series is exact rather than asymptotic:

    a_n = A((n+1)H_n - n) + (a - b)/k + sum_i s_i (-1)^n C(r_i, n)

with A = a/(H_{k+1} - 1). The root -2 contributes s(n+1); every other root
satisfies Re r > -2 and its term is o(n).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from multipivot.constants import IntegrationConstants, closed_form_s_minus2, solve_constants
from multipivot.indicial import indicial_roots
from multipivot.num_core import harmonic
from multipivot.oracle import Arithmetic, TollModel, exact_cost_table

IMAG_TOL = 1e-8


class InconsistentConstantsError(ValueError):
    pass


@dataclass(frozen=True)
class AsymptoticEstimate:
    k: int
    toll: TollModel
    leading_coeff: Fraction
    linear_coeff: Fraction
    constant_term: Fraction

    def __call__(self, n: int) -> Fraction:
        return self.leading_coeff * ((n + 1) * harmonic(n) - n) + self.linear_coeff * (n + 1)


def asymptotic_estimate(k: int, toll: TollModel) -> AsymptoticEstimate:
    a, b = Fraction(toll.a_bar), Fraction(toll.b_bar)
    return AsymptoticEstimate(
        k,
        toll,
        leading_coeff=a / (harmonic(k + 1) - 1),
        linear_coeff=closed_form_s_minus2(k, toll),
        constant_term=(a - b) / k,
    )


def theorem_estimate(n: int, k: int, toll: TollModel) -> Fraction:
    """Expected cost without its o(n) remainder, exact; requires n > k."""
    if n <= k:
        raise ValueError(f"estimate needs n > k, got n={n}, k={k}")
    return asymptotic_estimate(k, toll)(n)


def binom_complex(r: complex, n: int) -> complex:
    """(-1)^n C(r, n) = prod_{j<n} (j - r)/(j + 1)."""
    out = complex(1.0)
    for j in range(n):
        out *= (j - r) / (j + 1)
    return out


@dataclass
class SeriesReconstruction:
    k: int
    toll: TollModel
    roots: list[complex]
    constants: IntegrationConstants
    values: list[float]
    max_imag: float

    def __getitem__(self, n: int) -> float:
        return self.values[n]


def series_reconstruct(
    n_max: int,
    k: int,
    toll: TollModel,
    roots=None,
    constants: IntegrationConstants | None = None,
) -> SeriesReconstruction:
    """Evaluate the coefficient series a_0..a_{n_max} from roots and constants."""
    if roots is None:
        roots = constants.roots if constants is not None else indicial_roots(k)
    if constants is None:
        constants = solve_constants(k, toll, roots)
    est = asymptotic_estimate(k, toll)
    lead = float(est.leading_coeff)
    shift = float(est.constant_term)
    pairs = [(complex(r), constants.at(r)) for r in roots]
    # running (-1)^n C(r, n) per root, advanced by one factor each step
    terms = [complex(1.0)] * len(pairs)
    values: list[float] = []
    worst_imag = 0.0
    h = 0.0
    for n in range(n_max + 1):
        if n:
            h += 1.0 / n
            terms = [t * ((n - 1) - r) / n for t, (r, _) in zip(terms, pairs)]
        homogeneous = sum(s * t for (_, s), t in zip(pairs, terms))
        scale = max(1.0, abs(homogeneous.real))
        worst_imag = max(worst_imag, abs(homogeneous.imag) / scale)
        values.append(lead * ((n + 1) * h - n) + shift + homogeneous.real)
    if worst_imag > IMAG_TOL:
        raise InconsistentConstantsError(
            f"imaginary residue {worst_imag:.3e} exceeds {IMAG_TOL}; constants do not pair with conjugate roots"
        )
    return SeriesReconstruction(k, toll, [r for r, _ in pairs], constants, values, worst_imag)


@dataclass(frozen=True)
class GapRow:
    n: int
    oracle: float | Fraction
    theorem: Fraction
    gap: float | Fraction


def convergence_table(
    k: int,
    toll: TollModel,
    sample_points,
    arithmetic: Arithmetic | str = Arithmetic.FLOAT,
) -> list[GapRow]:
    """Oracle minus theorem estimate at each sample point, sorted by n.

    The gap should settle at (a - b)/k, the constant the estimate leaves in o(n).
    """
    points = sorted(set(int(n) for n in sample_points))
    if not points:
        return []
    if points[0] <= k:
        raise ValueError(f"sample points must exceed k={k}")
    table = exact_cost_table(k, toll, points[-1], arithmetic)
    est = asymptotic_estimate(k, toll)
    rows = []
    for n in points:
        f = table[n]
        t = est(n)
        gap = f - t if isinstance(f, Fraction) else f - float(t)
        rows.append(GapRow(n, f, t, gap))
    return rows


def predicted_limit(k: int, toll: TollModel) -> Fraction:
    return (Fraction(toll.a_bar) - Fraction(toll.b_bar)) / k

